import json

import numpy as np
import pytest

from specmux.config import (build_interference, build_link, build_scenario,
                            build_ssmm, config_digest, load_config,
                            load_preset, validate_config)
from specmux.errors import ConfigError

PRESETS = ("current", "soa_coupling", "soa_coupling_dense", "matched_dip")


@pytest.mark.parametrize("name", PRESETS)
def test_presets_validate_and_build(name):
    raw = load_preset(name)
    cfg = build_interference(raw)
    assert cfg.mode_count == raw["grid"]["mode_count"]
    if "keyrate" in raw:
        build_scenario(raw)
    if "repeater" in raw:
        build_link(raw)


def test_unknown_preset():
    with pytest.raises(ConfigError):
        load_preset("nope")


def test_validate_reports_json_path():
    raw = load_preset("current")
    raw["grid"]["spacing_hz"] = -1.0
    with pytest.raises(ConfigError, match=r"\$\.grid\.spacing_hz"):
        validate_config(raw)


def test_load_config_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.json")


def test_load_config_bad_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError, match="not valid JSON"):
        load_config(path)


def test_load_config_round_trip(tmp_path):
    raw = load_preset("current")
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(raw))
    assert config_digest(load_config(path)) == config_digest(raw)


def test_digest_is_key_order_insensitive():
    a = {"x": 1, "y": {"a": 2, "b": 3}}
    b = {"y": {"b": 3, "a": 2}, "x": 1}
    assert config_digest(a) == config_digest(b)
    assert config_digest(a) != config_digest({"x": 2, "y": {"a": 2, "b": 3}})


def test_station_length_mismatch_reports_path():
    raw = load_preset("current")
    raw["stations"]["a"]["mean_photon_numbers"] = [0.1]
    with pytest.raises(ConfigError, match="mean_photon_numbers"):
        build_interference(raw)


def test_complex_bin_weights_parse():
    raw = load_preset("current")
    s = 1.0 / np.sqrt(2.0)
    raw["stations"]["b"]["bin_weights"] = [[[0.0, s], [s, 0.0]],
                                           [[s, 0.0], [0.0, s]]]
    cfg = build_interference(raw)
    assert np.isclose(cfg.pulse_b.bin_weights[0, 0], 1j * s)


def test_build_ssmm_null_bandwidth_means_flat():
    raw = load_preset("current")
    raw["ssmm"]["envelope_bandwidth_hz"] = None
    model = build_ssmm(raw)
    assert np.all(model.envelope(np.array([0.0, 1e12])) == 1.0)


def test_missing_section_errors():
    with pytest.raises(ConfigError, match=r"\$\.grid"):
        build_interference({"envelope": {"fwhm_s": 1e-10,
                                         "bin_separation_s": 1e-9}})
    with pytest.raises(ConfigError, match=r"\$\.repeater"):
        build_link({})
