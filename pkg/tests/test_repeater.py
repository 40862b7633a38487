import math

import numpy as np
import pytest

from specmux.repeater import (LinkConfig, relay_rate, repeater_rate,
                              storage_constraints, tbp_sweep)


def test_relay_rate_direct_value():
    cfg = LinkConfig(distance=50e3, loss_db_per_m=0.2e-3, source_rate=1e6)
    assert relay_rate(cfg) == pytest.approx(1e6 * 10.0 ** (-1.0))


def test_repeater_matches_closed_form_two_links():
    # n = 2, M = 10, 10 dB per elementary link
    cfg = LinkConfig(distance=40e3, links=2, loss_db_per_m=5e-4,
                     source_rate=1.0, modes=10)
    expected = (1.0 - 0.9 ** 10) ** 2
    assert repeater_rate(cfg) == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(0.4242198, abs=1e-7)


def test_relay_is_single_link_single_mode_repeater():
    rng = np.random.default_rng(5150)
    for _ in range(1000):
        cfg = LinkConfig(distance=float(rng.uniform(1e3, 2e5)),
                         links=1,
                         loss_db_per_m=float(rng.uniform(1e-5, 1e-3)),
                         source_rate=float(rng.uniform(1e5, 1e9)),
                         modes=1)
        assert math.isclose(relay_rate(cfg), repeater_rate(cfg),
                            rel_tol=1e-12)


def test_repeater_monotone_in_modes_and_links():
    base = dict(distance=100e3, loss_db_per_m=2e-4, source_rate=1.0)
    rates_m = [repeater_rate(LinkConfig(links=2, modes=m, **base))
               for m in range(1, 30)]
    assert all(a < b for a, b in zip(rates_m, rates_m[1:]))
    # splitting a lossy link into more segments helps (multiplexed case)
    rates_n = [repeater_rate(LinkConfig(links=n, modes=10, **base))
               for n in (1, 2, 4)]
    assert rates_n[0] < rates_n[1] < rates_n[2]


def test_repeater_bounded_by_source_rate():
    cfg = LinkConfig(distance=1e3, links=2, loss_db_per_m=1e-6,
                     source_rate=80e6, modes=100)
    assert repeater_rate(cfg) <= cfg.source_rate


def test_storage_constraints():
    cfg = LinkConfig(distance=40e3, links=2, source_rate=80e6,
                     storage_time=1e-4, fiber_speed=2e8)
    m_temporal, t_fixed, feasible = storage_constraints(cfg)
    assert m_temporal == pytest.approx(8000.0)
    assert t_fixed == pytest.approx(1e-4)
    assert feasible
    short = LinkConfig(distance=40e3, links=2, source_rate=80e6,
                       storage_time=9e-5, fiber_speed=2e8)
    assert not storage_constraints(short)[2]


def test_link_config_validation():
    with pytest.raises(ValueError):
        LinkConfig(distance=0.0)
    with pytest.raises(ValueError):
        LinkConfig(distance=1e3, links=0)
    with pytest.raises(ValueError):
        LinkConfig(distance=1e3, modes=0)
    with pytest.raises(ValueError):
        LinkConfig(distance=1e3, loss_db_per_m=-1e-4)


def test_tbp_sweep_structure_and_optimum():
    cfg = LinkConfig(distance=40e3, links=2, loss_db_per_m=5e-4,
                     source_rate=80e6, modes=10)
    result = tbp_sweep(cfg, total_bandwidth=60e9, points=120)
    taus = result.column("pulse_duration_s")
    assert taus.size == 120
    assert np.all(np.diff(taus) > 0)
    # channel width * pulse duration = tbp constant
    widths = result.column("channel_width_hz")
    assert np.allclose(taus * widths, 1.0)
    rates = result.column("repeater_rate_hz")
    best = result.metadata["optimum_index"]
    assert rates[best] == rates.max()
    assert result.metadata["optimum_rate_hz"] == pytest.approx(rates.max())
    # interior optimum: the trade-off peaks away from both edges
    assert 0 < best < taus.size - 1


def test_tbp_sweep_validation():
    cfg = LinkConfig(distance=40e3)
    with pytest.raises(ValueError):
        tbp_sweep(cfg, total_bandwidth=0.0)
    with pytest.raises(ValueError):
        tbp_sweep(cfg, total_bandwidth=60e9, tau_min=1e-8, tau_max=1e-9)
