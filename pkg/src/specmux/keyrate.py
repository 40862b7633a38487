"""Per-spectral-mode MDI-QKD secret key rates and the multiplexed
enhancement curves for the three experimental scenarios.

The rate model is the omniscient-simulation variant: single-photon-pair
yield and phase error are taken directly from the model,

    R_m = R_source * [ P11 * Y11 * (1 - H2(e_X)) - Q_m * f * H2(e_Z) ]

clipped at zero, with P11 the two-station single-photon emission
probability, Y11 = eta_A * eta_B / 2 (linear-optics BSM), Q_m the simulated
coincidence gain of mode m at the interference operating point, and H2 the
binary entropy. Mode m's effective efficiency is its diagonal mode-mapper
transmission (coupling x envelope x passband) times the detector efficiency.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import SpectralModeGrid, TemporalEnvelope, WeakCoherentPulseSpec
from .errors import ConstraintViolation
from .hom import DetectorModel, InterferenceConfig, coincidence_probability
from .qubit import TimeBinQubitSpec, basis_error_rates, build_state
from .ssmm import SSMMModel, transmission
from .sweep import SweepResult

SCENARIO_NAMES = ("current", "soa_coupling", "soa_coupling_dense", "custom")


@dataclass(frozen=True)
class ScenarioConfig:
    """One experimental scenario plus channel/detector parameters."""

    name: str
    ssmm: SSMMModel
    envelope: TemporalEnvelope
    detector: DetectorModel = field(default_factory=DetectorModel)
    mu_a: float = 0.1
    mu_b: float = 0.1
    hom_visibility: float = 0.42
    source_rate: float = 80e6
    ec_inefficiency: float = 1.16
    max_modes: int = 7
    qubit_a: TimeBinQubitSpec = field(
        default_factory=lambda: TimeBinQubitSpec(0.0, 1000.0, 10.0))
    qubit_b: TimeBinQubitSpec = field(
        default_factory=lambda: TimeBinQubitSpec(0.0, 1000.0, 10.0))

    def __post_init__(self):
        if self.name not in SCENARIO_NAMES:
            raise ValueError(f"unknown scenario name {self.name!r}")
        if not 0.0 <= self.hom_visibility <= 0.5:
            raise ValueError("hom_visibility must lie in [0, 0.5]")
        if self.max_modes < 1:
            raise ValueError("max_modes must be >= 1")
        if self.mu_a < 0 or self.mu_b < 0:
            raise ValueError("mean photon numbers must be >= 0")


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def _single_mode_gain(scenario: ScenarioConfig, arm_transmission: float) -> float:
    """Coincidence gain at the interference operating point for one mode
    whose combined mode-mapper transmission is `arm_transmission`."""
    eff = scenario.detector.efficiency * arm_transmission
    grid = SpectralModeGrid(center_frequency=0.0, spacing=1e9, mode_count=1)
    ssmm = SSMMModel(grid=grid, passband_fwhm=1e9, peak_coupling=1.0)
    env = scenario.envelope
    make = lambda st, mu: WeakCoherentPulseSpec(
        station=st, mean_photon_numbers=[mu], bin_weights=[[0.0, 1.0]],
        phase_offsets=[0.0], envelope=env)
    det = DetectorModel(
        efficiency=eff,
        dark_click_probability=scenario.detector.dark_click_probability,
        coincidence_window=scenario.detector.coincidence_window)
    config = InterferenceConfig(
        pulse_a=make("A", scenario.mu_a), pulse_b=make("B", scenario.mu_b),
        ssmm_1=ssmm, ssmm_2=ssmm, detectors=det, delay=0.0,
        overlap_deficit=math.sqrt(2.0 * scenario.hom_visibility))
    return coincidence_probability(config, (0, 0))


def mode_key_rate(scenario: ScenarioConfig, mode_index: int,
                  arm_transmission: float | None = None) -> float:
    """Secret key rate (bits/s) contributed by one spectral mode.

    `arm_transmission` overrides the mode's mode-mapper transmission; pass
    1.0 to evaluate the SSMM-free baseline.
    """
    if arm_transmission is None:
        offsets = scenario.ssmm.grid.mode_offsets
        arm_transmission = transmission(scenario.ssmm, mode_index,
                                        float(offsets[mode_index]))
    eta = scenario.detector.efficiency * arm_transmission
    p11 = scenario.mu_a * scenario.mu_b * math.exp(-(scenario.mu_a + scenario.mu_b))
    y11 = 0.5 * eta * eta
    state_a = build_state(scenario.qubit_a)
    state_b = build_state(scenario.qubit_b)
    e_z, e_x = basis_error_rates(state_a, state_b, scenario.hom_visibility)
    gain = _single_mode_gain(scenario, arm_transmission)
    rate = p11 * y11 * (1.0 - binary_entropy(e_x)) \
        - gain * scenario.ec_inefficiency * binary_entropy(e_z)
    return scenario.source_rate * max(0.0, rate)


def baseline_rate(scenario: ScenarioConfig) -> float:
    """Single-mode rate with the mode-mapper losses removed."""
    return mode_key_rate(scenario, 0, arm_transmission=1.0)


def mode_fill_order(ssmm: SSMMModel) -> list[int]:
    """Mode indices ordered from the envelope center outward."""
    offsets = ssmm.grid.mode_offsets - ssmm.grid.center_frequency
    return sorted(range(len(offsets)), key=lambda i: (abs(offsets[i]), offsets[i]))


def enhancement_curve(scenario: ScenarioConfig, m_max: int) -> SweepResult:
    """Cumulative multiplexed key rate over the first M modes (filled from
    the envelope center outward) relative to the SSMM-free single-mode
    baseline."""
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    if m_max > scenario.max_modes:
        raise ConstraintViolation(
            f"requested {m_max} modes but scenario {scenario.name!r} supports "
            f"at most {scenario.max_modes} within its spectral bandwidth")
    if m_max > scenario.ssmm.grid.mode_count:
        raise ConstraintViolation(
            f"requested {m_max} modes but the grid holds only "
            f"{scenario.ssmm.grid.mode_count}")
    base = baseline_rate(scenario)
    order = mode_fill_order(scenario.ssmm)
    rows = np.empty((m_max, 3))
    total = 0.0
    for i in range(m_max):
        total += mode_key_rate(scenario, order[i])
        rows[i] = (i + 1, total, total / base if base > 0 else math.inf)
    return SweepResult(columns=["modes_used", "rate_bits_per_s", "enhancement"],
                       data=rows, metadata={"scenario": scenario.name})
