"""Parametric model of the VIPA-based spectral-to-spatial mode mapper.

Each spatial output channel has a Gaussian power passband centered on its
spectral mode; the whole device sits under a Gaussian coupling envelope
whose FWHM is the device's total spectral bandwidth. Both responses are
power (not amplitude) responses.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import SpectralModeGrid
from .sweep import SweepResult

_4LN2 = 4.0 * math.log(2.0)


def rejection_to_passband_fwhm(spacing: float, rejection_db: float) -> float:
    """Passband FWHM whose Gaussian response is `rejection_db` down one
    channel spacing away from the peak."""
    if rejection_db <= 0:
        raise ValueError("rejection must be positive (dB)")
    # exp(-4 ln2 s^2 / w^2) = 10^(-r/10)
    return spacing * math.sqrt(10.0 * _4LN2 / (rejection_db * math.log(10.0)))


@dataclass(frozen=True)
class SSMMModel:
    """Channel grid, passband, crosstalk level and coupling envelope.

    If `adjacent_rejection_db` is given it overrides `passband_fwhm` so the
    response one grid spacing away from a channel center is exactly that many
    dB below the peak. An infinite `envelope_bandwidth` means a flat envelope.
    `focal_length` only affects the reported spatial channel positions.
    """

    grid: SpectralModeGrid
    passband_fwhm: float = 3.2e9
    peak_coupling: float = 1.0
    adjacent_rejection_db: float | None = None
    envelope_bandwidth: float = math.inf
    envelope_shape: str = "gaussian"
    focal_length: float = 1.0
    angular_dispersion: float = 1e-12  # rad/Hz, spatial-separation metadata only

    def __post_init__(self):
        if not 0.0 <= self.peak_coupling <= 1.0:
            raise ValueError("peak_coupling must lie in [0, 1]")
        if self.passband_fwhm <= 0:
            raise ValueError("passband_fwhm must be positive")
        if self.adjacent_rejection_db is not None and self.adjacent_rejection_db < 0:
            raise ValueError("adjacent_rejection_db must be >= 0")
        if self.envelope_shape != "gaussian":
            raise ValueError(f"unsupported envelope shape {self.envelope_shape!r}")
        # One extra spacing of slack: the 20-mode dense preset slightly
        # overfills the quoted 60 GHz device bandwidth.
        if self.envelope_bandwidth < self.grid.span - self.grid.spacing:
            raise ValueError("envelope bandwidth smaller than the mode-grid span")

    @property
    def effective_passband_fwhm(self) -> float:
        if self.adjacent_rejection_db is not None:
            return rejection_to_passband_fwhm(self.grid.spacing,
                                              self.adjacent_rejection_db)
        return self.passband_fwhm

    def passband(self, detuning) -> np.ndarray:
        w = self.effective_passband_fwhm
        return np.exp(-_4LN2 * np.square(detuning) / (w * w))

    def envelope(self, frequency) -> np.ndarray:
        if not math.isfinite(self.envelope_bandwidth):
            return np.ones_like(np.asarray(frequency, dtype=float))
        bw = self.envelope_bandwidth
        df = np.asarray(frequency, dtype=float) - self.grid.center_frequency
        return np.exp(-_4LN2 * np.square(df) / (bw * bw))

    def channel_positions(self) -> np.ndarray:
        """Spatial position of each output channel in the lens focal plane (m)."""
        return self.focal_length * self.angular_dispersion * (
            self.grid.mode_offsets - self.grid.center_frequency)


@dataclass(frozen=True)
class CrosstalkMatrix:
    """entries[c, m] is the power transmission of spectral mode m into
    spatial output channel c."""

    entries: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.entries, dtype=float)
        object.__setattr__(self, "entries", t)
        if np.any(t < 0) or np.any(t > 1):
            raise ValueError("crosstalk entries must lie in [0, 1]")
        col_sums = t.sum(axis=0)
        if np.any(col_sums > 1.0 + 1e-9):
            raise ValueError("passive device: per-mode transmissions sum above 1")
        m = t.shape[0]
        for mode in range(m):
            for chan in range(m):
                if chan != mode and t[chan, mode] >= t[mode, mode]:
                    raise ValueError("crosstalk matrix not diagonally dominant")


def transmission(model: SSMMModel, channel: int, frequency: float):
    """Power transmission of light at `frequency` into output `channel`."""
    if not 0 <= channel < model.grid.mode_count:
        raise IndexError(f"channel {channel} out of range for "
                         f"{model.grid.mode_count} modes")
    center = model.grid.mode_offsets[channel]
    f = np.asarray(frequency, dtype=float)
    out = model.peak_coupling * model.envelope(f) * model.passband(f - center)
    return float(out) if out.ndim == 0 else out


def crosstalk_matrix(model: SSMMModel) -> CrosstalkMatrix:
    offsets = model.grid.mode_offsets
    m = model.grid.mode_count
    entries = np.empty((m, m))
    for c in range(m):
        entries[c, :] = transmission(model, c, offsets)
    return CrosstalkMatrix(entries=entries)


def frequency_response_scan(model: SSMMModel, f_min: float, f_max: float,
                            step: float) -> SweepResult:
    """Per-channel transmission sampled on a regular frequency grid."""
    if step <= 0:
        raise ValueError("step must be positive")
    if f_min >= f_max:
        raise ValueError("empty frequency range")
    n = int(round((f_max - f_min) / step)) + 1
    freqs = f_min + step * np.arange(n)
    freqs = freqs[freqs <= f_max + 1e-9 * step]
    cols = [transmission(model, c, freqs) for c in range(model.grid.mode_count)]
    data = np.column_stack([freqs] + cols)
    names = ["frequency_hz"] + [f"transmission_ch{c}"
                                for c in range(model.grid.mode_count)]
    return SweepResult(columns=names, data=data)
