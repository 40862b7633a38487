"""Coincidence statistics for two phase-randomized weak-coherent-pulse
trains on a balanced beam splitter, detected behind two mode mappers.

The analytic engine works with beam-splitter output intensities: for each
spectral mode m the two outputs carry

    J(+/-)_m(phi) = base_m +/- amp_m * cos(phi + phase_m)

where base_m = (mu_A + mu_B)/2 and the interference amplitude includes the
temporal overlap, the calibrated overlap deficit and the bin-weight inner
product. The component of B's pulse orthogonal to A's envelope is carried
along in base_m, so energy is conserved for every phi. Detector intensities
follow from the mode-mapper crosstalk matrices, click probabilities are
1 - (1-d) exp(-lambda), and the common random phase phi is averaged by
fixed-order periodic quadrature.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np

from .core import WeakCoherentPulseSpec, temporal_overlap
from .errors import FitError
from .ssmm import SSMMModel, crosstalk_matrix
from .sweep import SweepResult


@dataclass(frozen=True)
class DetectorModel:
    """Threshold detector: efficiency, dark-click probability per
    coincidence window, and the window duration."""

    efficiency: float = 0.8
    dark_click_probability: float = 1e-6
    coincidence_window: float = 1e-9

    def __post_init__(self):
        if not 0.0 <= self.efficiency <= 1.0:
            raise ValueError("efficiency must lie in [0, 1]")
        if not 0.0 <= self.dark_click_probability < 1.0:
            raise ValueError("dark click probability must lie in [0, 1)")


@dataclass(frozen=True)
class InterferenceConfig:
    """Everything needed to evaluate the interferometer output statistics.

    `detectors` is either one DetectorModel applied everywhere or a mapping
    from (ssmm_index, channel) to a DetectorModel, ssmm_index in {1, 2}.
    `overlap_deficit` multiplies the temporal overlap and soaks up all
    unmodeled distinguishability (calibrated against the measured matched-mode
    visibility). With `independent_mode_phases` each of B's spectral modes
    gets its own random phase instead of one common phase.
    """

    pulse_a: WeakCoherentPulseSpec
    pulse_b: WeakCoherentPulseSpec
    ssmm_1: SSMMModel
    ssmm_2: SSMMModel
    detectors: object = field(default_factory=DetectorModel)
    delay: float = 0.0
    phase_randomized: bool = True
    independent_mode_phases: bool = False
    overlap_deficit: float = 1.0
    quadrature_order: int = 256

    def __post_init__(self):
        if self.ssmm_1.grid != self.ssmm_2.grid:
            raise ValueError("both SSMMs must share the same spectral grid")
        m = self.ssmm_1.grid.mode_count
        if self.pulse_a.mode_count != m or self.pulse_b.mode_count != m:
            raise ValueError("pulse mode count does not match the SSMM grid")
        if self.pulse_a.envelope != self.pulse_b.envelope:
            raise ValueError("stations must share the temporal envelope")
        if not 0.0 <= self.overlap_deficit <= 1.0:
            raise ValueError("overlap_deficit must lie in [0, 1]")
        if self.quadrature_order < 1:
            raise ValueError("quadrature_order must be >= 1")

    def detector(self, ssmm_index: int, channel: int) -> DetectorModel:
        if isinstance(self.detectors, DetectorModel):
            return self.detectors
        return self.detectors[(ssmm_index, channel)]

    @property
    def mode_count(self) -> int:
        return self.ssmm_1.grid.mode_count


@dataclass
class CoincidenceResult:
    """Singles and pairwise coincidence probabilities, plus count rates."""

    singles: dict          # (ssmm_index, channel) -> click probability
    coincidences: dict     # ((1, c1), (2, c2)) -> coincidence probability
    counts_per_second: dict
    source_rate: float


def _interference_terms(config: InterferenceConfig):
    """Per-mode (base, amplitude, phase) of the output intensities."""
    a, b = config.pulse_a, config.pulse_b
    mu_a = a.mean_photon_numbers
    mu_b = b.mean_photon_numbers
    kappa = np.sum(np.conj(a.bin_weights) * b.bin_weights, axis=1)
    overlap = config.overlap_deficit * temporal_overlap(a.envelope, config.delay)
    base = 0.5 * (mu_a + mu_b)
    amp = overlap * np.sqrt(mu_a * mu_b) * np.abs(kappa)
    phase = (b.phase_offsets - a.phase_offsets) + np.angle(kappa)
    return base, amp, phase


def _phase_nodes(config: InterferenceConfig, order: int | None = None) -> np.ndarray:
    if not config.phase_randomized:
        return np.zeros(1)
    n = order if order is not None else config.quadrature_order
    return 2.0 * math.pi * np.arange(n) / n


def _mode_intensities(config, phi):
    """J+ and J- per (phase node, mode)."""
    base, amp, phase = _interference_terms(config)
    cosarg = np.cos(phi[:, None] + phase[None, :])
    beat = amp[None, :] * cosarg
    return base[None, :] + beat, base[None, :] - beat


def _noclick_expectations(config, c1, c2, order=None):
    """E[no click at (1,c1)], E[no click at (2,c2)] and the joint, averaged
    over the random phase(s)."""
    phi = _phase_nodes(config, order)
    j_plus, j_minus = _mode_intensities(config, phi)
    t1 = crosstalk_matrix(config.ssmm_1).entries[c1, :]
    t2 = crosstalk_matrix(config.ssmm_2).entries[c2, :]
    d1 = config.detector(1, c1)
    d2 = config.detector(2, c2)
    lam1 = d1.efficiency * j_plus * t1[None, :]   # per (node, mode)
    lam2 = d2.efficiency * j_minus * t2[None, :]
    if config.independent_mode_phases and config.phase_randomized:
        e1 = np.prod(np.mean(np.exp(-lam1), axis=0))
        e2 = np.prod(np.mean(np.exp(-lam2), axis=0))
        e12 = np.prod(np.mean(np.exp(-lam1 - lam2), axis=0))
    else:
        e1 = np.mean(np.exp(-lam1.sum(axis=1)))
        e2 = np.mean(np.exp(-lam2.sum(axis=1)))
        e12 = np.mean(np.exp(-(lam1 + lam2).sum(axis=1)))
    nd1 = 1.0 - d1.dark_click_probability
    nd2 = 1.0 - d2.dark_click_probability
    return nd1 * e1, nd2 * e2, nd1 * nd2 * e12


def coincidence_probability(config: InterferenceConfig,
                            pair: tuple[int, int]) -> float:
    """Probability of a coincidence between channel pair[0] behind SSMM 1 and
    channel pair[1] behind SSMM 2, for one pulse slot."""
    c1, c2 = pair
    m = config.mode_count
    if not (0 <= c1 < m and 0 <= c2 < m):
        raise IndexError(f"channel pair {pair} out of range for {m} modes")
    e1, e2, e12 = _noclick_expectations(config, c1, c2)
    return float(1.0 - e1 - e2 + e12)


def coincidence_result(config: InterferenceConfig,
                       source_rate: float = 80e6) -> CoincidenceResult:
    """All singles and channel-pair coincidence probabilities."""
    m = config.mode_count
    singles = {}
    coincidences = {}
    for c1 in range(m):
        for c2 in range(m):
            e1, e2, e12 = _noclick_expectations(config, c1, c2)
            singles[(1, c1)] = 1.0 - e1
            singles[(2, c2)] = 1.0 - e2
            coincidences[((1, c1), (2, c2))] = float(1.0 - e1 - e2 + e12)
    counts = {k: v * source_rate for k, v in coincidences.items()}
    return CoincidenceResult(singles=singles, coincidences=coincidences,
                             counts_per_second=counts, source_rate=source_rate)


def visibility(c_dist: float, c_indist: float) -> float:
    """Fractional dip depth (C_dist - C_indist) / C_dist."""
    if c_dist <= 0:
        raise ValueError("visibility undefined: distinguishable counts are zero")
    if c_indist < 0:
        raise ValueError("counts cannot be negative")
    return (c_dist - c_indist) / c_dist


def hom_dip_scan(config: InterferenceConfig, dt_min: float, dt_max: float,
                 steps: int, pairs=None, counts_mode: bool = False,
                 source_rate: float = 80e6, accumulation: float = 1.0,
                 poisson: bool = False, seed: int | None = None) -> SweepResult:
    """Coincidence probability (or synthetic counts) versus relative delay.

    In counts mode the probabilities are scaled by source_rate*accumulation;
    with `poisson` each point is sampled from its own RNG stream derived from
    (seed, point index) so results do not depend on evaluation order.
    """
    if steps < 3:
        raise ValueError("need at least 3 sweep points")
    if dt_min >= dt_max:
        raise ValueError("empty delay range")
    m = config.mode_count
    if pairs is None:
        pairs = [(c1, c2) for c1 in range(m) for c2 in range(m)]
    delays = np.linspace(dt_min, dt_max, steps)
    rows = np.empty((steps, 1 + len(pairs)))
    rows[:, 0] = delays
    for i, dt in enumerate(delays):
        cfg = dataclasses.replace(config, delay=float(dt))
        for j, pair in enumerate(pairs):
            p = coincidence_probability(cfg, pair)
            if counts_mode:
                expected = p * source_rate * accumulation
                if poisson:
                    rng = np.random.default_rng(
                        np.random.SeedSequence([0 if seed is None else seed, i, j]))
                    expected = float(rng.poisson(expected))
                rows[i, 1 + j] = expected
            else:
                rows[i, 1 + j] = p
    unit = "counts" if counts_mode else "probability"
    names = ["delay_s"] + [f"{unit}_pair_{c1}_{c2}" for c1, c2 in pairs]
    return SweepResult(columns=names, data=rows,
                       metadata={"pairs": pairs, "counts_mode": counts_mode})


@dataclass
class DipFit:
    """Parameters of C(dt) = baseline*(1 - V exp(-(dt-center)^2/(2 width^2)))."""

    baseline: float
    visibility: float
    center: float
    width: float
    converged: bool
    residual_norm: float
    iterations: int


def _dip_model(p, t):
    c0, v, t0, w = p
    g = np.exp(-((t - t0) ** 2) / (2.0 * w * w))
    return c0 * (1.0 - v * g), g


def fit_gaussian_dip(delays, counts, max_iter: int = 200) -> DipFit:
    """Damped Gauss-Newton least-squares fit of a Gaussian dip.

    Deterministic initialization: baseline = max, center = argmin,
    width = range/6. Raises FitError (carrying the best parameters seen)
    if the iteration budget is exhausted without converging.
    """
    t = np.asarray(delays, dtype=float)
    y = np.asarray(counts, dtype=float)
    if t.size < 5:
        raise ValueError("need at least 5 points spanning the dip")
    ymax = float(np.max(y))
    ymin = float(np.min(y))
    p = np.array([ymax,
                  0.0 if ymax == 0 else (ymax - ymin) / ymax,
                  float(t[np.argmin(y)]),
                  (t[-1] - t[0]) / 6.0])
    lam = 1e-3
    f, g = _dip_model(p, t)
    r = y - f
    cost = float(r @ r)
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        c0, v, t0, w = p
        dt_ = t - t0
        jac = np.column_stack([
            1.0 - v * g,                      # d f / d baseline
            -c0 * g,                          # d f / d visibility
            -c0 * v * g * dt_ / (w * w),      # d f / d center
            -c0 * v * g * dt_ ** 2 / (w ** 3),
        ])
        jtj = jac.T @ jac
        jtr = jac.T @ r
        if np.linalg.norm(jtr) < 1e-14 * max(1.0, abs(cost)):
            converged = True
            break
        step_ok = False
        for _ in range(30):
            try:
                delta = np.linalg.solve(jtj + lam * np.diag(np.diag(jtj))
                                        + 1e-30 * np.eye(4), jtr)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            p_new = p + delta
            p_new[3] = abs(p_new[3]) if p_new[3] != 0 else p[3]
            f_new, g_new = _dip_model(p_new, t)
            r_new = y - f_new
            cost_new = float(r_new @ r_new)
            if cost_new <= cost:
                step_ok = True
                lam = max(lam * 0.1, 1e-12)
                rel_step = np.max(np.abs(delta) / (np.abs(p) + 1e-30))
                improvement = cost - cost_new
                p, f, g, r, cost = p_new, f_new, g_new, r_new, cost_new
                if rel_step < 1e-12 or improvement <= 1e-12 * (cost + 1e-300):
                    converged = True
                break
            lam *= 10.0
        if converged:
            break
        if not step_ok:
            # Damping exhausted without improvement: local minimum.
            converged = True
            break
    fit = DipFit(baseline=float(p[0]), visibility=float(p[1]),
                 center=float(p[2]), width=float(abs(p[3])),
                 converged=converged, residual_norm=math.sqrt(cost),
                 iterations=it)
    if not converged:
        raise FitError(f"dip fit did not converge in {max_iter} iterations",
                       best=fit)
    return fit


def phase_scan(config: InterferenceConfig, thetas,
               dt_range=(-1.5e-9, 1.5e-9), steps: int = 41,
               pair: tuple[int, int] = (0, 0)) -> SweepResult:
    """HOM visibility versus the early/late phase of station B's qubits.

    Requires both stations to prepare superposition time-bin states; theta
    rotates the late-bin amplitude of every one of B's modes. Each point runs
    a dip scan and extracts the visibility by Gaussian fitting.
    """
    wa = config.pulse_a.bin_weights
    wb = config.pulse_b.bin_weights
    if np.any(np.abs(wa) < 1e-12) or np.any(np.abs(wb) < 1e-12):
        raise ValueError("phase scan needs superposition states in both bins")
    thetas = np.asarray(thetas, dtype=float)
    out = np.empty((thetas.size, 2))
    for i, theta in enumerate(thetas):
        w = wb.copy()
        w[:, 1] = w[:, 1] * np.exp(1j * theta)
        pulse_b = dataclasses.replace(config.pulse_b, bin_weights=w)
        cfg = dataclasses.replace(config, pulse_b=pulse_b)
        scan = hom_dip_scan(cfg, dt_range[0], dt_range[1], steps, pairs=[pair])
        fit = fit_gaussian_dip(scan.column("delay_s"), scan.data[:, 1])
        out[i] = (theta, fit.visibility)
    return SweepResult(columns=["theta_rad", "visibility"], data=out,
                       metadata={"pair": pair})
