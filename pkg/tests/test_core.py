import math

import numpy as np
import pytest

from specmux.core import (SpectralModeGrid, TemporalEnvelope,
                          WeakCoherentPulseSpec, mode_amplitudes,
                          temporal_overlap)

ENV = TemporalEnvelope(fwhm=625e-12, bin_separation=2.5e-9)


def test_grid_offsets_two_modes():
    grid = SpectralModeGrid(center_frequency=0.0, spacing=8e9, mode_count=2)
    assert np.allclose(grid.mode_offsets, [-4e9, 4e9])
    assert grid.span == 8e9


def test_grid_offsets_symmetric_and_centered():
    grid = SpectralModeGrid(center_frequency=1e12, spacing=3.2e9, mode_count=7)
    offsets = grid.mode_offsets
    assert offsets.size == 7
    assert np.isclose(np.mean(offsets), 1e12)
    assert np.allclose(np.diff(offsets), 3.2e9)
    assert np.allclose(offsets - 1e12, -(offsets[::-1] - 1e12))


def test_grid_single_mode():
    grid = SpectralModeGrid(center_frequency=5e9, spacing=1e9, mode_count=1)
    assert np.allclose(grid.mode_offsets, [5e9])
    assert grid.span == 0.0


@pytest.mark.parametrize("kwargs", [
    dict(center_frequency=0.0, spacing=0.0, mode_count=2),
    dict(center_frequency=0.0, spacing=-1e9, mode_count=2),
    dict(center_frequency=0.0, spacing=1e9, mode_count=0),
])
def test_grid_validation(kwargs):
    with pytest.raises(ValueError):
        SpectralModeGrid(**kwargs)


def test_envelope_sigma_fwhm_relation():
    assert math.isclose(ENV.sigma * 2.0 * math.sqrt(2.0 * math.log(2.0)),
                        ENV.fwhm, rel_tol=1e-12)


def test_envelope_validation():
    with pytest.raises(ValueError):
        TemporalEnvelope(fwhm=0.0, bin_separation=1e-9)
    with pytest.raises(ValueError):
        TemporalEnvelope(fwhm=1e-9, bin_separation=0.5e-9)
    with pytest.raises(ValueError):
        TemporalEnvelope(fwhm=1e-10, bin_separation=1e-9, shape="lorentzian")


def test_temporal_overlap_basic_properties():
    assert temporal_overlap(ENV, 0.0) == 1.0
    assert temporal_overlap(ENV, 1e-9) == temporal_overlap(ENV, -1e-9)
    delays = np.linspace(0.0, 3e-9, 50)
    values = [temporal_overlap(ENV, d) for d in delays]
    assert all(a >= b for a, b in zip(values, values[1:]))


def test_temporal_overlap_at_one_fwhm_is_exactly_quarter():
    # exp(-fwhm^2 / (4 sigma^2)) = exp(-2 ln 2) = 1/4
    assert math.isclose(temporal_overlap(ENV, ENV.fwhm), 0.25, rel_tol=1e-12)


def _pulse(**overrides):
    kwargs = dict(station="A", mean_photon_numbers=[0.1, 0.2],
                  bin_weights=[[0.0, 1.0], [0.6, 0.8]],
                  phase_offsets=[0.0, 0.5], envelope=ENV)
    kwargs.update(overrides)
    return WeakCoherentPulseSpec(**kwargs)


def test_pulse_spec_accepts_valid_input():
    spec = _pulse()
    assert spec.mode_count == 2
    assert spec.bin_weights.dtype == complex


def test_pulse_spec_rejects_unnormalized_weights():
    with pytest.raises(ValueError):
        _pulse(bin_weights=[[0.0, 0.9], [0.6, 0.8]])


def test_pulse_spec_rejects_mismatched_lengths():
    with pytest.raises(ValueError):
        _pulse(phase_offsets=[0.0])
    with pytest.raises(ValueError):
        _pulse(mean_photon_numbers=[0.1])


def test_pulse_spec_rejects_bad_station_and_negative_mu():
    with pytest.raises(ValueError):
        _pulse(station="C")
    with pytest.raises(ValueError):
        _pulse(mean_photon_numbers=[-0.1, 0.2])


def test_mode_amplitudes_values():
    spec = _pulse(phase_offsets=[0.0, math.pi / 2.0])
    amps = mode_amplitudes(spec)
    assert amps.shape == (2, 2)
    assert np.isclose(amps[0, 1], math.sqrt(0.1))
    assert np.isclose(amps[1, 0], 1j * 0.6 * math.sqrt(0.2))
    # total energy equals the mean photon numbers
    assert np.allclose(np.sum(np.abs(amps) ** 2, axis=1),
                       spec.mean_photon_numbers)
