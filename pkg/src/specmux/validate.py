"""Cross-validation of the analytic engine against independent oracles:
the truncated-Fock coincidence computation and a Monte Carlo check of the
multiplexed repeater formula."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .core import SpectralModeGrid, TemporalEnvelope, WeakCoherentPulseSpec
from .errors import OracleValidationError
from .fock import fock_oracle_coincidence
from .hom import DetectorModel, InterferenceConfig, coincidence_probability
from .repeater import LinkConfig, repeater_rate
from .ssmm import SSMMModel


def random_interference_config(rng: np.random.Generator) -> InterferenceConfig:
    """A random valid config within the oracle's domain (<= 2 modes,
    mu <= 0.2)."""
    mode_count = int(rng.integers(1, 3))
    spacing = float(rng.uniform(2e9, 10e9))
    grid = SpectralModeGrid(center_frequency=0.0, spacing=spacing,
                            mode_count=mode_count)
    ssmm = SSMMModel(grid=grid,
                     peak_coupling=float(rng.uniform(0.05, 0.6)),
                     adjacent_rejection_db=float(rng.uniform(6.0, 20.0)),
                     envelope_bandwidth=float(rng.uniform(4, 10)) * spacing)
    fwhm = float(rng.uniform(0.3e-9, 1e-9))
    envelope = TemporalEnvelope(fwhm=fwhm, bin_separation=4e-9)

    def pulse(station):
        mu = rng.uniform(0.0, 0.2, size=mode_count)
        w_early = rng.uniform(0.0, 1.0, size=mode_count)
        phases = rng.uniform(0.0, 2.0 * math.pi, size=(mode_count, 2))
        weights = np.stack([np.sqrt(w_early) * np.exp(1j * phases[:, 0]),
                            np.sqrt(1.0 - w_early) * np.exp(1j * phases[:, 1])],
                           axis=1)
        return WeakCoherentPulseSpec(
            station=station, mean_photon_numbers=mu, bin_weights=weights,
            phase_offsets=rng.uniform(0.0, 2.0 * math.pi, size=mode_count),
            envelope=envelope)

    detector = DetectorModel(
        efficiency=float(rng.uniform(0.3, 1.0)),
        dark_click_probability=float(rng.uniform(0.0, 1e-4)))
    return InterferenceConfig(
        pulse_a=pulse("A"), pulse_b=pulse("B"), ssmm_1=ssmm, ssmm_2=ssmm,
        detectors=detector,
        delay=float(rng.uniform(-1.5, 1.5)) * fwhm,
        overlap_deficit=float(rng.uniform(0.7, 1.0)))


@dataclass
class ValidationReport:
    name: str
    passed: bool
    detail: str


def validate_fock_oracle(n_configs: int = 200, seed: int = 1234,
                         tolerance: float = 1e-6) -> ValidationReport:
    """Analytic engine vs the truncated-Fock oracle on random configs."""
    rng = np.random.default_rng(seed)
    start = time.monotonic()
    worst = 0.0
    for _ in range(n_configs):
        config = random_interference_config(rng)
        m = config.mode_count
        pair = (int(rng.integers(m)), int(rng.integers(m)))
        analytic = coincidence_probability(config, pair)
        oracle = fock_oracle_coincidence(config, pair, n_max=10)
        worst = max(worst, abs(analytic - oracle))
    elapsed = time.monotonic() - start
    return ValidationReport(
        name="analytic vs truncated-Fock coincidence",
        passed=worst < tolerance,
        detail=f"{n_configs} configs, max |diff| = {worst:.3e} "
               f"(tol {tolerance:.0e}), {elapsed:.1f} s")


def validate_repeater_monte_carlo(trials: int = 1_000_000, seed: int = 99,
                                  sigma_limit: float = 3.0) -> ValidationReport:
    """Analytic multiplexed-repeater success probability vs direct Bernoulli
    simulation of per-mode, per-link successes."""
    cfg = LinkConfig(distance=40e3, links=2, loss_db_per_m=5e-4,
                     source_rate=1.0, modes=10)
    analytic = repeater_rate(cfg)
    p_mode = 10.0 ** (-(cfg.loss_db_per_m * cfg.distance / cfg.links) / 10.0)
    rng = np.random.default_rng(seed)
    link_ok = np.ones(trials, dtype=bool)
    for _ in range(cfg.links):
        successes = rng.random((trials, cfg.modes)) < p_mode
        link_ok &= successes.any(axis=1)
    estimate = link_ok.mean()
    se = math.sqrt(max(analytic * (1.0 - analytic), 1e-12) / trials)
    dev = abs(estimate - analytic) / se
    return ValidationReport(
        name="repeater formula vs Monte Carlo",
        passed=dev < sigma_limit,
        detail=f"analytic {analytic:.6f}, MC {estimate:.6f}, "
               f"deviation {dev:.2f} sigma over {trials} trials")


def validate_quadrature_self_check(seed: int = 7,
                                   tolerance: float = 1e-10) -> ValidationReport:
    """Doubling the phase-averaging order must not move the result."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(20):
        config = random_interference_config(rng)
        m = config.mode_count
        pair = (int(rng.integers(m)), int(rng.integers(m)))
        import dataclasses
        doubled = dataclasses.replace(config,
                                      quadrature_order=2 * config.quadrature_order)
        worst = max(worst, abs(coincidence_probability(config, pair)
                               - coincidence_probability(doubled, pair)))
    return ValidationReport(
        name="phase-quadrature self check",
        passed=worst < tolerance,
        detail=f"max order-doubling shift = {worst:.3e} (tol {tolerance:.0e})")


def run_all(n_configs: int = 200, seed: int = 1234) -> list[ValidationReport]:
    return [
        validate_fock_oracle(n_configs=n_configs, seed=seed),
        validate_repeater_monte_carlo(seed=seed + 1),
        validate_quadrature_self_check(seed=seed + 2),
    ]


def require_all(reports: list[ValidationReport]) -> None:
    failed = [r for r in reports if not r.passed]
    if failed:
        raise OracleValidationError(
            "; ".join(f"{r.name}: {r.detail}" for r in failed))
