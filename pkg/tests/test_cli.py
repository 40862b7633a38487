import json

import pytest

from specmux.cli import main
from specmux.config import config_digest, load_preset
from specmux.sweep import read_csv


def run(tmp_path, *argv):
    out = tmp_path / "out"
    code = main(list(argv) + ["--out", str(out)])
    return code, out


def test_freq_response(tmp_path):
    code, out = run(tmp_path, "freq-response", "--preset", "current")
    assert code == 0
    scan = read_csv(out / "freq_response.csv")
    assert scan.columns[0] == "frequency_hz"
    assert scan.data.shape == (121, 3)
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["subcommand"] == "freq-response"
    assert manifest["config_digest"] == config_digest(load_preset("current"))
    assert manifest["outputs"] == ["freq_response.csv"]


def test_hom_dip_probabilities(tmp_path):
    code, out = run(tmp_path, "hom-dip", "--preset", "current")
    assert code == 0
    scan = read_csv(out / "hom_dip.csv")
    assert scan.data.shape[1] == 5  # delay + four channel pairs
    fits = read_csv(out / "hom_dip_fits.csv")
    assert fits.data.shape[0] == 4
    vis = dict(zip(zip(fits.column("channel_1").astype(int),
                       fits.column("channel_2").astype(int)),
                   fits.column("visibility")))
    assert vis[(0, 0)] > vis[(0, 1)]
    assert vis[(1, 1)] > vis[(1, 0)]


def test_hom_dip_counts_with_poisson(tmp_path):
    code, out = run(tmp_path, "hom-dip", "--preset", "matched_dip",
                    "--counts", "--poisson", "--seed", "7")
    assert code == 0
    scan = read_csv(out / "hom_dip.csv")
    assert scan.columns[1].startswith("counts_")
    counts = scan.data[:, 1]
    assert (counts == counts.round()).all()


def test_phase_scan(tmp_path):
    code, out = run(tmp_path, "phase-scan", "--preset", "current")
    assert code == 0
    scan = read_csv(out / "phase_scan.csv")
    assert scan.columns == ["theta_rad", "visibility"]
    assert scan.data.shape[0] == 41


def test_keyrate_sweep_all_scenarios(tmp_path):
    code, out = run(tmp_path, "keyrate-sweep")
    assert code == 0
    for name in ("current", "soa_coupling", "soa_coupling_dense"):
        curve = read_csv(out / f"keyrate_{name}.csv")
        assert curve.columns == ["modes_used", "rate_bits_per_s",
                                 "enhancement"]


def test_repeater_rate(tmp_path):
    code, out = run(tmp_path, "repeater-rate", "--preset", "current")
    assert code == 0
    table = read_csv(out / "repeater_rate.csv")
    assert table.data.shape[0] == 10
    assert (table.column("storage_feasible") == 1.0).all()


def test_tbp_sweep(tmp_path):
    code, out = run(tmp_path, "tbp-sweep", "--preset", "current")
    assert code == 0
    table = read_csv(out / "tbp_sweep.csv")
    assert table.column("repeater_rate_hz").max() > 0


def test_config_file_equivalent_to_preset(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(load_preset("current")))
    code1, out1 = run(tmp_path / "a", "freq-response", "--config", str(cfg))
    code2, out2 = run(tmp_path / "b", "freq-response", "--preset", "current")
    assert code1 == code2 == 0
    assert (out1 / "freq_response.csv").read_bytes() \
        == (out2 / "freq_response.csv").read_bytes()


def test_reruns_are_byte_identical(tmp_path):
    args = ("hom-dip", "--preset", "current", "--counts", "--poisson",
            "--seed", "123")
    _, out1 = run(tmp_path / "a", *args)
    _, out2 = run(tmp_path / "b", *args)
    for name in ("hom_dip.csv", "hom_dip_fits.csv"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_missing_config_is_exit_2(tmp_path, capsys):
    code, _ = run(tmp_path, "freq-response")
    assert code == 2
    assert "config" in capsys.readouterr().err


def test_invalid_config_is_exit_2(tmp_path):
    cfg = tmp_path / "bad.json"
    raw = load_preset("current")
    raw["detectors"]["efficiency"] = 2.0
    cfg.write_text(json.dumps(raw))
    code, _ = run(tmp_path, "freq-response", "--config", str(cfg))
    assert code == 2


def test_constraint_violation_is_exit_3(tmp_path):
    raw = load_preset("current")
    raw["keyrate"]["mode_count"] = 2
    raw["keyrate"]["max_modes"] = 5
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(raw))
    code, _ = run(tmp_path, "keyrate-sweep", "--config", str(cfg))
    assert code == 3


def test_validate_oracle_quick(tmp_path, capsys):
    code, out = run(tmp_path, "validate-oracle", "--preset", "current",
                    "--oracle-configs", "10")
    assert code == 0
    captured = capsys.readouterr().out
    assert captured.count("PASS") == 3
    table = read_csv(out / "validate_oracle.csv")
    assert (table.column("passed") == 1.0).all()


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
