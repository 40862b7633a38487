"""Command-line entry point: load a scenario configuration, run the named
experiment, write deterministic CSV outputs plus a run manifest.

Exit codes: 0 ok, 2 config error, 3 constraint violation,
4 oracle-validation failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import (build_interference, build_link, build_scenario,
                     config_digest, load_config, load_preset)
from .errors import ConfigError, ConstraintViolation, OracleValidationError
from .hom import fit_gaussian_dip, hom_dip_scan, phase_scan
from .keyrate import enhancement_curve
from .repeater import relay_rate, repeater_rate, storage_constraints, tbp_sweep
from .ssmm import frequency_response_scan
from .sweep import SweepResult
from . import validate as validate_mod

SCENARIO_PRESETS = ("current", "soa_coupling", "soa_coupling_dense")


def _load(args) -> dict:
    if args.config is not None:
        return load_config(args.config)
    if args.preset is not None:
        return load_preset(args.preset)
    raise ConfigError("either --config or --preset is required")


def _write_manifest(out_dir: Path, args, raw: dict, outputs: list[str]) -> None:
    manifest = {
        "subcommand": args.subcommand,
        "config_digest": config_digest(raw),
        "config_path": str(args.config) if args.config else None,
        "preset": args.preset,
        "seed": args.seed,
        "counts_mode": getattr(args, "counts", False),
        "tool_version": __version__,
        "outputs": sorted(outputs),
    }
    with open(out_dir / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _sweeps(raw: dict) -> dict:
    return raw.get("sweeps", {})


def cmd_freq_response(args, raw, out_dir) -> list[str]:
    sw = _sweeps(raw)
    from .config import build_ssmm
    model = build_ssmm(raw)
    result = frequency_response_scan(model,
                                     sw.get("frequency_min_hz", -6e9),
                                     sw.get("frequency_max_hz", 6e9),
                                     sw.get("frequency_step_hz", 1e8))
    result.to_csv(out_dir / "freq_response.csv")
    return ["freq_response.csv"]


def cmd_hom_dip(args, raw, out_dir) -> list[str]:
    config = build_interference(raw)
    sw = _sweeps(raw)
    src = raw.get("source", {})
    scan = hom_dip_scan(config,
                        sw.get("delay_min_s", -1.5e-9),
                        sw.get("delay_max_s", 1.5e-9),
                        sw.get("delay_points", 61),
                        counts_mode=args.counts,
                        source_rate=src.get("rate_hz", 80e6),
                        accumulation=src.get("accumulation_s", 1.0),
                        poisson=args.counts and args.poisson,
                        seed=args.seed)
    scan.to_csv(out_dir / "hom_dip.csv")
    fit_rows = []
    for j, (c1, c2) in enumerate(scan.metadata["pairs"]):
        fit = fit_gaussian_dip(scan.column("delay_s"), scan.data[:, 1 + j])
        fit_rows.append((c1, c2, fit.baseline, fit.visibility, fit.center,
                         fit.width, fit.residual_norm))
    fits = SweepResult(
        columns=["channel_1", "channel_2", "baseline", "visibility",
                 "center_s", "width_s", "residual_norm"],
        data=np.array(fit_rows))
    fits.to_csv(out_dir / "hom_dip_fits.csv")
    return ["hom_dip.csv", "hom_dip_fits.csv"]


def cmd_phase_scan(args, raw, out_dir) -> list[str]:
    config = build_interference(raw)
    # Superposition time-bin states on every mode; B's late-bin phase sweeps.
    w = np.full((config.mode_count, 2), 1.0 / np.sqrt(2.0), dtype=complex)
    config = dataclasses.replace(
        config,
        pulse_a=dataclasses.replace(config.pulse_a, bin_weights=w),
        pulse_b=dataclasses.replace(config.pulse_b, bin_weights=w))
    sw = _sweeps(raw)
    thetas = np.linspace(-np.pi, np.pi, sw.get("phase_points", 41))
    result = phase_scan(config, thetas,
                        dt_range=(sw.get("delay_min_s", -1.5e-9),
                                  sw.get("delay_max_s", 1.5e-9)),
                        steps=sw.get("delay_points", 61))
    result.to_csv(out_dir / "phase_scan.csv")
    return ["phase_scan.csv"]


def cmd_keyrate_sweep(args, raw, out_dir, preset_used) -> list[str]:
    outputs = []
    if args.config is not None or preset_used:
        jobs = [(raw, raw["keyrate"]["scenario"] if "keyrate" in raw else None)]
    else:
        jobs = [(load_preset(name), name) for name in SCENARIO_PRESETS]
    for job_raw, name in jobs:
        scenario = build_scenario(job_raw)
        curve = enhancement_curve(scenario, scenario.max_modes)
        fname = f"keyrate_{scenario.name}.csv"
        curve.to_csv(out_dir / fname)
        outputs.append(fname)
    return outputs


def cmd_repeater_rate(args, raw, out_dir) -> list[str]:
    cfg = build_link(raw)
    m_temporal, t_fixed, feasible = storage_constraints(cfg)
    rows = []
    for m in range(1, cfg.modes + 1):
        link = dataclasses.replace(cfg, modes=m)
        rows.append((m, repeater_rate(link), relay_rate(cfg), m_temporal,
                     t_fixed, 1.0 if feasible else 0.0))
    result = SweepResult(
        columns=["modes", "repeater_rate_hz", "relay_rate_hz",
                 "temporal_mode_capacity", "fixed_storage_time_s",
                 "storage_feasible"],
        data=np.array(rows))
    result.to_csv(out_dir / "repeater_rate.csv")
    return ["repeater_rate.csv"]


def cmd_tbp_sweep(args, raw, out_dir) -> list[str]:
    cfg = build_link(raw)
    t = raw.get("tbp", {})
    if "total_bandwidth_hz" not in t:
        raise ConfigError("$.tbp.total_bandwidth_hz: required for tbp-sweep")
    result = tbp_sweep(cfg, t["total_bandwidth_hz"],
                       tbp_constant=t.get("tbp_constant", 1.0),
                       duty=t.get("duty", 0.05),
                       tau_min=t.get("tau_min_s", 1e-11),
                       tau_max=t.get("tau_max_s", 1e-8),
                       points=t.get("points", 200))
    result.to_csv(out_dir / "tbp_sweep.csv")
    return ["tbp_sweep.csv"]


def cmd_validate_oracle(args, raw, out_dir) -> list[str]:
    reports = validate_mod.run_all(n_configs=args.oracle_configs,
                                   seed=args.seed)
    rows = []
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.name}: {r.detail}")
        rows.append((1.0 if r.passed else 0.0,))
    SweepResult(columns=["passed"], data=np.array(rows)).to_csv(
        out_dir / "validate_oracle.csv")
    validate_mod.require_all(reports)
    return ["validate_oracle.csv"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specmux",
        description="Spectrally multiplexed two-photon interference simulator")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", type=Path, help="JSON configuration file")
        p.add_argument("--preset", choices=("current", "soa_coupling",
                                            "soa_coupling_dense",
                                            "matched_dip"),
                       help="named built-in configuration")
        p.add_argument("--seed", type=int, default=0, help="master RNG seed")
        p.add_argument("--out", type=Path, default=Path("."),
                       help="output directory")
        group = p.add_mutually_exclusive_group()
        group.add_argument("--counts", action="store_true",
                           help="emit counts instead of probabilities")
        group.add_argument("--probabilities", dest="counts",
                           action="store_false",
                           help="emit probabilities (default)")
        p.add_argument("--poisson", action="store_true",
                       help="Poisson-sample counts (counts mode only)")
        return p

    add("freq-response", "per-channel SSMM frequency response scan")
    add("hom-dip", "coincidence dip scans for all channel pairs")
    add("phase-scan", "visibility versus early/late qubit phase")
    add("keyrate-sweep", "key-rate enhancement curves for the scenarios")
    add("repeater-rate", "analytic relay/repeater rates and constraints")
    add("tbp-sweep", "time-bandwidth-product trade-off sweep")
    p = add("validate-oracle", "cross-validate the engine against oracles")
    p.add_argument("--oracle-configs", type=int, default=200,
                   help="number of random configs for the Fock comparison")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        preset_used = args.preset is not None
        if args.subcommand == "keyrate-sweep" and not preset_used \
                and args.config is None:
            raw = load_preset("current")  # digest of the default scenario set
        else:
            raw = _load(args)
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        if args.subcommand == "freq-response":
            outputs = cmd_freq_response(args, raw, out_dir)
        elif args.subcommand == "hom-dip":
            outputs = cmd_hom_dip(args, raw, out_dir)
        elif args.subcommand == "phase-scan":
            outputs = cmd_phase_scan(args, raw, out_dir)
        elif args.subcommand == "keyrate-sweep":
            outputs = cmd_keyrate_sweep(args, raw, out_dir, preset_used)
        elif args.subcommand == "repeater-rate":
            outputs = cmd_repeater_rate(args, raw, out_dir)
        elif args.subcommand == "tbp-sweep":
            outputs = cmd_tbp_sweep(args, raw, out_dir)
        elif args.subcommand == "validate-oracle":
            outputs = cmd_validate_oracle(args, raw, out_dir)
        else:  # pragma: no cover
            parser.error(f"unknown subcommand {args.subcommand}")
        _write_manifest(out_dir, args, raw, outputs)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    except ConstraintViolation as err:
        print(f"constraint violation: {err}", file=sys.stderr)
        return 3
    except OracleValidationError as err:
        print(f"oracle validation failed: {err}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
