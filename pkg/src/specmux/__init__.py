"""Desk-scale simulator of spectrally multiplexed two-photon interference
between weak coherent pulses, with downstream MDI-QKD key-rate and
multiplexed-repeater rate estimators."""

__version__ = "0.1.0"

from .core import (SpectralModeGrid, TemporalEnvelope, WeakCoherentPulseSpec,
                   mode_amplitudes, temporal_overlap)
from .hom import (CoincidenceResult, DetectorModel, DipFit, InterferenceConfig,
                  coincidence_probability, coincidence_result, fit_gaussian_dip,
                  hom_dip_scan, phase_scan, visibility)
from .fock import fock_oracle_coincidence
from .keyrate import ScenarioConfig, enhancement_curve, mode_key_rate
from .qubit import QubitState, TimeBinQubitSpec, basis_error_rates, build_state
from .repeater import (LinkConfig, relay_rate, repeater_rate,
                       storage_constraints, tbp_sweep)
from .ssmm import (CrosstalkMatrix, SSMMModel, crosstalk_matrix,
                   frequency_response_scan, transmission)
from .sweep import SweepResult

__all__ = [
    "CoincidenceResult", "CrosstalkMatrix", "DetectorModel", "DipFit",
    "InterferenceConfig", "LinkConfig", "QubitState", "SSMMModel",
    "ScenarioConfig", "SpectralModeGrid", "SweepResult", "TemporalEnvelope",
    "TimeBinQubitSpec", "WeakCoherentPulseSpec", "basis_error_rates",
    "build_state", "coincidence_probability", "coincidence_result",
    "crosstalk_matrix", "enhancement_curve", "fit_gaussian_dip",
    "fock_oracle_coincidence", "frequency_response_scan", "hom_dip_scan",
    "mode_amplitudes", "mode_key_rate", "phase_scan", "relay_rate",
    "repeater_rate", "storage_constraints", "tbp_sweep", "temporal_overlap",
    "transmission", "visibility",
]
