import csv
import json

import pytest

from jscuav import cli, validation


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_budget_text_and_json(capsys):
    code, out, _ = run(capsys, "budget", "--beta", "0.5", "--m", "20")
    assert code == 0 and "ub_acsa_m2" in out and "branch" in out
    code, out, _ = run(capsys, "budget", "--format", "json")
    rec = json.loads(out)
    assert code == 0 and rec["m"] == 100 and rec["sinr_min"] == pytest.approx(0.12302562, rel=1e-7)


def test_global_flags_before_subcommand(tmp_path, capsys):
    cfg = tmp_path / "a.cfg"
    cfg.write_text("num_sus = 7\n")
    code, out, _ = run(capsys, "--config", str(cfg), "--format", "json", "budget")
    assert code == 0 and json.loads(out)["m"] == 7


def test_bad_config_exit_code(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("sensing_power_ratio = 3\n")
    code, _, err = run(capsys, "budget", "--config", str(cfg))
    assert code == 2 and "sensing_power_ratio" in err
    code, _, _ = run(capsys, "budget", "--config", str(tmp_path / "missing.cfg"))
    assert code == 2


def test_link_csv(tmp_path, capsys):
    out = tmp_path / "link.csv"
    code, _, _ = run(capsys, "link", "--points", "5", "--max-distance", "5000", "--out", str(out))
    lines = out.read_text().splitlines()
    assert code == 0 and lines[0].startswith("# x_q_m")
    rows = list(csv.DictReader(lines[1:]))
    assert len(rows) == 5 and float(rows[-1]["distance_m"]) == 5000.0


def test_sweep_outputs(tmp_path, capsys):
    out = tmp_path / "s.json"
    code, _, err = run(capsys, "sweep", "--beta-grid", "0.1:0.3:0.1", "--m-grid", "1,5",
                       "--format", "json", "--out", str(out))
    doc = json.loads(out.read_text())
    assert code == 0 and len(doc["grid"]) == 6 and "argmax" in err
    code, out_text, _ = run(capsys, "sweep", "--beta-grid", "0.5", "--m-grid", "3")
    assert code == 0 and out_text.splitlines()[0].startswith("beta_r,m,")
    code, _, _ = run(capsys, "sweep", "--beta-grid", "1.5", "--m-grid", "3")
    assert code == 2


def test_radar_demo(tmp_path, capsys):
    out = tmp_path / "rd.csv"
    code, _, err = run(capsys, "radar-demo", "--range", "15", "--n-c", "64", "--m-s", "8",
                       "--out", str(out))
    assert code == 0 and "range_index=10" in err
    assert len(out.read_text().splitlines()) == 1 + 64 * 8


def test_beampattern_coma(tmp_path, capsys):
    out = tmp_path / "bp.csv"
    code, _, err = run(capsys, "beampattern", "--array", "coma", "--res-deg", "2", "--out", str(out))
    assert code == 0 and "peak_sidelobe_db" in err
    assert out.read_text().startswith("azimuth_rad,elevation_rad,power_db")


def test_validate_exit_codes(capsys, monkeypatch):
    code, out, _ = run(capsys, "validate")
    assert code == 0 and out.count("PASS") == len(validation.CHECKS)
    bad = validation.CheckResult("forced", False, "x")
    monkeypatch.setattr(validation, "run_all", lambda seed: [bad])
    code, out, _ = run(capsys, "validate")
    assert code == 3 and "FAIL" in out


def test_grid_parser():
    assert cli._grid("0.1:0.3:0.1", float) == [0.1, 0.2, 0.3]
    assert cli._grid("1,4,9", int) == [1, 4, 9]
    assert cli._grid(None, int) is None
