"""Spectral/temporal mode arithmetic and weak-coherent-pulse descriptions.

All frequencies are in Hz relative to the optical carrier, all times in
seconds, all phases in radians.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# FWHM of a Gaussian = 2*sqrt(2 ln 2) * sigma
FWHM_TO_SIGMA = 1.0 / (2.0 * math.sqrt(2.0 * math.log(2.0)))


@dataclass(frozen=True)
class SpectralModeGrid:
    """Evenly spaced comb of spectral modes, symmetric about its center."""

    center_frequency: float
    spacing: float
    mode_count: int

    def __post_init__(self):
        if self.spacing <= 0:
            raise ValueError(f"spacing must be positive, got {self.spacing}")
        if self.mode_count < 1:
            raise ValueError(f"mode_count must be >= 1, got {self.mode_count}")

    @property
    def mode_offsets(self) -> np.ndarray:
        """Per-mode detunings from the carrier, symmetric about the center."""
        k = np.arange(self.mode_count, dtype=float)
        return self.center_frequency + (k - (self.mode_count - 1) / 2.0) * self.spacing

    @property
    def span(self) -> float:
        return (self.mode_count - 1) * self.spacing


@dataclass(frozen=True)
class TemporalEnvelope:
    """Gaussian pulse envelope plus the early/late bin separation."""

    fwhm: float
    bin_separation: float
    shape: str = "gaussian"

    def __post_init__(self):
        if self.shape != "gaussian":
            raise ValueError(f"unsupported envelope shape {self.shape!r}")
        if self.fwhm <= 0:
            raise ValueError(f"fwhm must be positive, got {self.fwhm}")
        if self.bin_separation <= self.fwhm:
            raise ValueError("bin_separation must exceed fwhm so bins are resolvable")

    @property
    def sigma(self) -> float:
        return self.fwhm * FWHM_TO_SIGMA


def temporal_overlap(envelope: TemporalEnvelope, delay: float) -> float:
    """Amplitude overlap of two identical Gaussian envelopes offset by `delay`.

    Equals exp(-dt^2 / (4 sigma^2)); 1 at zero delay, even in the delay,
    and monotonically decreasing in |delay|.
    """
    if envelope.fwhm <= 0:
        raise ValueError("envelope fwhm must be positive")
    s = envelope.sigma
    return float(math.exp(-(delay * delay) / (4.0 * s * s)))


@dataclass(frozen=True)
class WeakCoherentPulseSpec:
    """Per-station description of the multiplexed weak coherent pulse train.

    `bin_weights[m]` holds the (normalized) complex early/late amplitudes of
    mode m; `phase_offsets[m]` is the deterministic per-mode phase.
    """

    station: str
    mean_photon_numbers: np.ndarray
    bin_weights: np.ndarray
    phase_offsets: np.ndarray
    envelope: TemporalEnvelope

    def __post_init__(self):
        object.__setattr__(self, "mean_photon_numbers",
                           np.asarray(self.mean_photon_numbers, dtype=float))
        object.__setattr__(self, "bin_weights",
                           np.atleast_2d(np.asarray(self.bin_weights, dtype=complex)))
        object.__setattr__(self, "phase_offsets",
                           np.asarray(self.phase_offsets, dtype=float))
        if self.station not in ("A", "B"):
            raise ValueError(f"station must be 'A' or 'B', got {self.station!r}")
        mu = self.mean_photon_numbers
        if mu.ndim != 1 or np.any(mu < 0):
            raise ValueError("mean photon numbers must be a 1-d array of non-negatives")
        w = self.bin_weights
        if w.shape[0] != mu.size or self.phase_offsets.shape != mu.shape:
            raise ValueError("per-mode field lengths disagree")
        norms = np.sum(np.abs(w) ** 2, axis=1)
        if not np.allclose(norms, 1.0, atol=1e-9):
            raise ValueError("bin weights must be normalized per mode")

    @property
    def mode_count(self) -> int:
        return self.mean_photon_numbers.size


def mode_amplitudes(spec: WeakCoherentPulseSpec) -> np.ndarray:
    """Complex amplitude for every (mode, bin): sqrt(mu_m) w_k exp(i dtheta_m)."""
    mu = spec.mean_photon_numbers
    phase = np.exp(1j * spec.phase_offsets)
    return np.sqrt(mu)[:, None] * spec.bin_weights * phase[:, None]
