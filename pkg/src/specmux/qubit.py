"""Imperfect time-bin qubit model driven by measured signal/background
counts, and the basis-dependent error rates it implies."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TimeBinQubitSpec:
    """Measured early/late signal counts, background counts and relative
    phase for one prepared state."""

    early_signal: float
    late_signal: float
    background: float
    theta: float = 0.0
    basis: str = "Z"

    def __post_init__(self):
        if self.early_signal < 0 or self.late_signal < 0 or self.background < 0:
            raise ValueError("counts must be non-negative")
        if self.early_signal + self.late_signal <= 0:
            raise ValueError("total signal counts must be positive")
        if self.basis not in ("Z", "X"):
            raise ValueError(f"basis must be 'Z' or 'X', got {self.basis!r}")


@dataclass(frozen=True)
class QubitState:
    """Normalized early/late amplitudes plus the derived bin-imbalance m and
    background fraction b."""

    amplitude_e: complex
    amplitude_l: complex
    m: float
    b: float

    def __post_init__(self):
        norm = abs(self.amplitude_e) ** 2 + abs(self.amplitude_l) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state not normalized: |psi|^2 = {norm}")

    def overlap(self, other: "QubitState") -> complex:
        return (np.conj(self.amplitude_e) * other.amplitude_e
                + np.conj(self.amplitude_l) * other.amplitude_l)


def build_state(spec: TimeBinQubitSpec) -> QubitState:
    """State with amplitudes (sqrt(m+b), e^{i theta} sqrt(1-m+b))/sqrt(1+2b),
    m = S_e/(S_e+S_l), b = B/(S_e+S_l)."""
    total = spec.early_signal + spec.late_signal
    m = spec.early_signal / total
    b = spec.background / total
    norm = math.sqrt(1.0 + 2.0 * b)
    amp_e = math.sqrt(m + b) / norm
    amp_l = math.sqrt(1.0 - m + b) / norm * np.exp(1j * spec.theta)
    return QubitState(amplitude_e=amp_e, amplitude_l=complex(amp_l), m=m, b=b)


def basis_error_rates(state_a: QubitState, state_b: QubitState,
                      hom_visibility: float, leak: float = 0.0):
    """(e_Z, e_X) for a BSM between the two states.

    Z errors are background/leakage driven: per state,
    ez = (b + min(m, 1-m)*leak) / (1 + 2b), combined assuming independent
    flips. X errors come from the interference contrast:
    e_X = 1/2 - V*|<psi_A|psi_B>|^2, clipped to [0, 1/2].
    """
    if not 0.0 <= hom_visibility <= 0.5:
        raise ValueError("hom_visibility must lie in [0, 0.5]")

    def ez_single(s):
        return (s.b + min(s.m, 1.0 - s.m) * leak) / (1.0 + 2.0 * s.b)

    ez_a, ez_b = ez_single(state_a), ez_single(state_b)
    e_z = ez_a + ez_b - 2.0 * ez_a * ez_b
    ov = abs(state_a.overlap(state_b)) ** 2
    e_x = min(max(0.5 - hom_visibility * ov, 0.0), 0.5)
    return e_z, e_x
