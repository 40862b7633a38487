"""Scenario configuration: JSON schema validation, object builders,
preset loading and config digests."""
from __future__ import annotations

import hashlib
import json
import math
from importlib import resources

import jsonschema
import numpy as np

from .core import SpectralModeGrid, TemporalEnvelope, WeakCoherentPulseSpec
from .errors import ConfigError
from .hom import DetectorModel, InterferenceConfig
from .keyrate import ScenarioConfig
from .qubit import TimeBinQubitSpec
from .repeater import LinkConfig
from .ssmm import SSMMModel

PRESET_NAMES = ("current", "soa_coupling", "soa_coupling_dense", "matched_dip")

_number = {"type": "number"}
_weight = {"oneOf": [{"type": "number"},
                     {"type": "array", "items": {"type": "number"},
                      "minItems": 2, "maxItems": 2}]}
_station = {
    "type": "object",
    "required": ["mean_photon_numbers", "bin_weights"],
    "properties": {
        "mean_photon_numbers": {"type": "array", "items": {"type": "number",
                                                           "minimum": 0}},
        "bin_weights": {"type": "array",
                        "items": {"type": "array", "items": _weight}},
        "phase_offsets_rad": {"type": "array", "items": _number},
    },
}
_qubit = {
    "type": "object",
    "required": ["early_signal", "late_signal", "background"],
    "properties": {
        "early_signal": {"type": "number", "minimum": 0},
        "late_signal": {"type": "number", "minimum": 0},
        "background": {"type": "number", "minimum": 0},
        "theta": _number,
    },
}

CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "grid": {
            "type": "object",
            "required": ["spacing_hz", "mode_count"],
            "properties": {
                "center_frequency_hz": _number,
                "spacing_hz": {"type": "number", "exclusiveMinimum": 0},
                "mode_count": {"type": "integer", "minimum": 1},
            },
        },
        "envelope": {
            "type": "object",
            "required": ["fwhm_s", "bin_separation_s"],
            "properties": {
                "shape": {"enum": ["gaussian"]},
                "fwhm_s": {"type": "number", "exclusiveMinimum": 0},
                "bin_separation_s": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "ssmm": {
            "type": "object",
            "properties": {
                "passband_fwhm_hz": {"type": "number", "exclusiveMinimum": 0},
                "peak_coupling": {"type": "number", "minimum": 0, "maximum": 1},
                "adjacent_rejection_db": {"oneOf": [{"type": "number",
                                                     "minimum": 0},
                                                    {"type": "null"}]},
                "envelope_bandwidth_hz": {"oneOf": [{"type": "number",
                                                     "exclusiveMinimum": 0},
                                                    {"type": "null"}]},
                "envelope_shape": {"enum": ["gaussian"]},
                "focal_length_m": {"type": "number", "exclusiveMinimum": 0},
                "angular_dispersion_rad_per_hz": _number,
            },
        },
        "stations": {
            "type": "object",
            "required": ["a", "b"],
            "properties": {"a": _station, "b": _station},
        },
        "detectors": {
            "type": "object",
            "properties": {
                "efficiency": {"type": "number", "minimum": 0, "maximum": 1},
                "dark_click_probability": {"type": "number", "minimum": 0,
                                           "exclusiveMaximum": 1},
                "coincidence_window_s": {"type": "number",
                                         "exclusiveMinimum": 0},
                "provenance": {"type": "string"},
            },
        },
        "interference": {
            "type": "object",
            "properties": {
                "delay_s": _number,
                "phase_randomized": {"type": "boolean"},
                "independent_mode_phases": {"type": "boolean"},
                "overlap_deficit": {"type": "number", "minimum": 0,
                                    "maximum": 1},
                "quadrature_order": {"type": "integer", "minimum": 1},
            },
        },
        "source": {
            "type": "object",
            "properties": {
                "rate_hz": {"type": "number", "exclusiveMinimum": 0},
                "accumulation_s": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "sweeps": {
            "type": "object",
            "properties": {
                "delay_min_s": _number,
                "delay_max_s": _number,
                "delay_points": {"type": "integer", "minimum": 3},
                "frequency_min_hz": _number,
                "frequency_max_hz": _number,
                "frequency_step_hz": {"type": "number", "exclusiveMinimum": 0},
                "phase_points": {"type": "integer", "minimum": 2},
            },
        },
        "keyrate": {
            "type": "object",
            "required": ["scenario", "mode_count", "channel_spacing_hz",
                         "peak_coupling", "max_modes"],
            "properties": {
                "scenario": {"enum": ["current", "soa_coupling",
                                      "soa_coupling_dense", "custom"]},
                "mode_count": {"type": "integer", "minimum": 1},
                "channel_spacing_hz": {"type": "number", "exclusiveMinimum": 0},
                "peak_coupling": {"type": "number", "minimum": 0, "maximum": 1},
                "adjacent_rejection_db": {"oneOf": [{"type": "number",
                                                     "minimum": 0},
                                                    {"type": "null"}]},
                "passband_fwhm_hz": {"type": "number", "exclusiveMinimum": 0},
                "envelope_bandwidth_hz": {"type": "number",
                                          "exclusiveMinimum": 0},
                "hom_visibility": {"type": "number", "minimum": 0,
                                   "maximum": 0.5},
                "ec_inefficiency": {"type": "number", "minimum": 1},
                "max_modes": {"type": "integer", "minimum": 1},
                "mu_a": {"type": "number", "minimum": 0},
                "mu_b": {"type": "number", "minimum": 0},
                "qubit_a": _qubit,
                "qubit_b": _qubit,
            },
        },
        "repeater": {
            "type": "object",
            "required": ["distance_m", "links"],
            "properties": {
                "distance_m": {"type": "number", "exclusiveMinimum": 0},
                "links": {"type": "integer", "minimum": 1},
                "loss_db_per_m": {"type": "number", "minimum": 0},
                "source_rate_hz": {"type": "number", "exclusiveMinimum": 0},
                "modes": {"type": "integer", "minimum": 1},
                "storage_time_s": {"type": "number", "exclusiveMinimum": 0},
                "fiber_speed_m_s": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "tbp": {
            "type": "object",
            "required": ["total_bandwidth_hz"],
            "properties": {
                "total_bandwidth_hz": {"type": "number", "exclusiveMinimum": 0},
                "tbp_constant": {"type": "number", "exclusiveMinimum": 0},
                "duty": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
                "tau_min_s": {"type": "number", "exclusiveMinimum": 0},
                "tau_max_s": {"type": "number", "exclusiveMinimum": 0},
                "points": {"type": "integer", "minimum": 2},
            },
        },
    },
}


def validate_config(raw: dict) -> dict:
    try:
        jsonschema.validate(raw, CONFIG_SCHEMA)
    except jsonschema.ValidationError as err:
        path = "$" + "".join(f".{p}" if isinstance(p, str) else f"[{p}]"
                             for p in err.absolute_path)
        raise ConfigError(f"{path}: {err.message}") from None
    return raw


def load_config(path) -> dict:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as err:
        raise ConfigError(f"cannot read config: {err}") from None
    except json.JSONDecodeError as err:
        raise ConfigError(f"config is not valid JSON: {err}") from None
    return validate_config(raw)


def load_preset(name: str) -> dict:
    if name not in PRESET_NAMES:
        raise ConfigError(f"unknown preset {name!r}; available: "
                          + ", ".join(PRESET_NAMES))
    text = resources.files("specmux.presets").joinpath(f"{name}.json").read_text()
    return validate_config(json.loads(text))


def config_digest(raw: dict) -> str:
    canonical = json.dumps(raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def _section(raw: dict, name: str) -> dict:
    if name not in raw:
        raise ConfigError(f"$.{name}: section required for this subcommand")
    return raw[name]


def _weights_to_complex(rows) -> np.ndarray:
    out = []
    for row in rows:
        out.append([complex(w[0], w[1]) if isinstance(w, (list, tuple))
                    else complex(w) for w in row])
    return np.asarray(out, dtype=complex)


def build_grid(raw: dict) -> SpectralModeGrid:
    g = _section(raw, "grid")
    return SpectralModeGrid(center_frequency=g.get("center_frequency_hz", 0.0),
                            spacing=g["spacing_hz"],
                            mode_count=g["mode_count"])


def build_envelope(raw: dict) -> TemporalEnvelope:
    e = _section(raw, "envelope")
    return TemporalEnvelope(fwhm=e["fwhm_s"],
                            bin_separation=e["bin_separation_s"],
                            shape=e.get("shape", "gaussian"))


def build_ssmm(raw: dict, grid: SpectralModeGrid | None = None) -> SSMMModel:
    s = raw.get("ssmm", {})
    bw = s.get("envelope_bandwidth_hz")
    return SSMMModel(
        grid=grid if grid is not None else build_grid(raw),
        passband_fwhm=s.get("passband_fwhm_hz", 3.2e9),
        peak_coupling=s.get("peak_coupling", 1.0),
        adjacent_rejection_db=s.get("adjacent_rejection_db"),
        envelope_bandwidth=math.inf if bw is None else bw,
        envelope_shape=s.get("envelope_shape", "gaussian"),
        focal_length=s.get("focal_length_m", 1.0),
        angular_dispersion=s.get("angular_dispersion_rad_per_hz", 1e-12))


def build_detector(raw: dict) -> DetectorModel:
    d = raw.get("detectors", {})
    return DetectorModel(
        efficiency=d.get("efficiency", 0.8),
        dark_click_probability=d.get("dark_click_probability", 1e-6),
        coincidence_window=d.get("coincidence_window_s", 1e-9))


def _build_pulse(station: str, spec: dict, envelope: TemporalEnvelope,
                 mode_count: int) -> WeakCoherentPulseSpec:
    mu = spec["mean_photon_numbers"]
    if len(mu) != mode_count:
        raise ConfigError(f"$.stations.{station.lower()}.mean_photon_numbers: "
                          f"expected {mode_count} entries, got {len(mu)}")
    return WeakCoherentPulseSpec(
        station=station,
        mean_photon_numbers=mu,
        bin_weights=_weights_to_complex(spec["bin_weights"]),
        phase_offsets=spec.get("phase_offsets_rad", [0.0] * mode_count),
        envelope=envelope)


def build_interference(raw: dict) -> InterferenceConfig:
    grid = build_grid(raw)
    envelope = build_envelope(raw)
    stations = _section(raw, "stations")
    ssmm = build_ssmm(raw, grid)
    inter = raw.get("interference", {})
    try:
        return InterferenceConfig(
            pulse_a=_build_pulse("A", stations["a"], envelope, grid.mode_count),
            pulse_b=_build_pulse("B", stations["b"], envelope, grid.mode_count),
            ssmm_1=ssmm, ssmm_2=ssmm,
            detectors=build_detector(raw),
            delay=inter.get("delay_s", 0.0),
            phase_randomized=inter.get("phase_randomized", True),
            independent_mode_phases=inter.get("independent_mode_phases", False),
            overlap_deficit=inter.get("overlap_deficit", 1.0),
            quadrature_order=inter.get("quadrature_order", 256))
    except ValueError as err:
        raise ConfigError(str(err)) from None


def build_scenario(raw: dict) -> ScenarioConfig:
    k = _section(raw, "keyrate")
    grid = SpectralModeGrid(center_frequency=0.0,
                            spacing=k["channel_spacing_hz"],
                            mode_count=k["mode_count"])
    bw = k.get("envelope_bandwidth_hz", 60e9)
    try:
        ssmm = SSMMModel(grid=grid,
                         passband_fwhm=k.get("passband_fwhm_hz", 3.2e9),
                         peak_coupling=k["peak_coupling"],
                         adjacent_rejection_db=k.get("adjacent_rejection_db"),
                         envelope_bandwidth=bw)
        qa = k.get("qubit_a", {"early_signal": 0.0, "late_signal": 1000.0,
                               "background": 10.0})
        qb = k.get("qubit_b", qa)
        make_qubit = lambda q: TimeBinQubitSpec(
            early_signal=q["early_signal"], late_signal=q["late_signal"],
            background=q["background"], theta=q.get("theta", 0.0))
        return ScenarioConfig(
            name=k["scenario"],
            ssmm=ssmm,
            envelope=build_envelope(raw),
            detector=build_detector(raw),
            mu_a=k.get("mu_a", 0.1),
            mu_b=k.get("mu_b", 0.1),
            hom_visibility=k.get("hom_visibility", 0.42),
            source_rate=raw.get("source", {}).get("rate_hz", 80e6),
            ec_inefficiency=k.get("ec_inefficiency", 1.16),
            max_modes=k["max_modes"],
            qubit_a=make_qubit(qa), qubit_b=make_qubit(qb))
    except ValueError as err:
        raise ConfigError(str(err)) from None


def build_link(raw: dict) -> LinkConfig:
    r = _section(raw, "repeater")
    try:
        return LinkConfig(
            distance=r["distance_m"],
            links=r["links"],
            loss_db_per_m=r.get("loss_db_per_m", 0.2e-3),
            source_rate=r.get("source_rate_hz",
                              raw.get("source", {}).get("rate_hz", 80e6)),
            modes=r.get("modes", 1),
            storage_time=r.get("storage_time_s", 100e-6),
            fiber_speed=r.get("fiber_speed_m_s", 2e8))
    except ValueError as err:
        raise ConfigError(str(err)) from None
