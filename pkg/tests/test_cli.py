import json
import re

import pytest

from finsleroid.cli import main


def run_cli(args):
    return main(args)


def test_verify_pass_exit_code(capsys):
    assert run_cli(["verify", "--suite", "metric", "--samples", "4", "--g", "0.5"]) == 0
    out = capsys.readouterr().out
    assert "overall: PASS" in out


def test_verify_bad_config_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"dimension": "four"}')
    assert run_cli(["verify", "--config", str(bad), "--samples", "2"]) == 2


def test_verify_json_deterministic(tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    args = ["verify", "--suite", "metric", "--samples", "3", "--seed", "9",
            "--format", "json", "--g", "0.7"]
    assert run_cli(args + ["--output", str(out1)]) == 0
    assert run_cli(args + ["--output", str(out2)]) == 0
    strip = lambda t: re.sub(r'"timestamp": "[^"]*"', '"timestamp": ""', t)
    assert strip(out1.read_text()) == strip(out2.read_text())


def test_tensors_axis_dump(capsys):
    assert run_cli(["tensors", "--x", "0.5,0,0,0", "--y", "1,0,0,0", "--g", "0.5"]) == 0
    dump = json.loads(capsys.readouterr().out)
    assert dump["scalars"]["K"] == pytest.approx(1.0, abs=1e-14)
    assert dump["metric"]["g_dd"][0][0] == pytest.approx(1.0, abs=1e-14)
    assert "note" in dump


def test_tensors_riemannian_charge(capsys):
    assert run_cli(
        ["tensors", "--x", "0.5,0.1,-0.2,0.3", "--y", "1,0.3,-0.2,0.1", "--g", "0"]
    ) == 0
    dump = json.loads(capsys.readouterr().out)
    # All charge-proportional fields vanish at g = 0.
    assert dump["cartan"]["norm"] == pytest.approx(0.0, abs=1e-12)
    assert max(abs(v) for v in dump["cartan"]["A_d"]) < 1e-12


def test_tensors_bad_point(capsys):
    assert run_cli(["tensors", "--x", "0.5,0,0,0", "--y", "0,0,0,0", "--g", "0.5"]) == 2


def test_cosmo_scenario(tmp_path, capsys):
    cfg = tmp_path / "dust.json"
    cfg.write_text(json.dumps({
        "g": 1.0, "kappa1": 0,
        "closure": {"kind": "eos", "value": 0.0},
        "L0": 1.0, "H0": 1.0, "t_span": [0.0, 20.0], "n_points": 200,
    }))
    csv_path = tmp_path / "out.csv"
    assert run_cli(["cosmo", "--config", str(cfg), "--output", str(csv_path)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["dust_invariant_drift"] < 1e-8
    header = csv_path.read_text().splitlines()[0]
    assert header == "t,L,H,q_cosm,p,rho,residual"


def test_cosmo_recollapse_reported(tmp_path, capsys):
    cfg = tmp_path / "closed.json"
    cfg.write_text(json.dumps({
        "g": 0.0, "kappa1": 1,
        "closure": {"kind": "eos", "value": 0.0},
        "L0": 1.0, "H0": 0.05, "t_span": [0.0, 500.0], "n_points": 100,
    }))
    assert run_cli(["cosmo", "--config", str(cfg)]) == 1
    assert "recollapse" in capsys.readouterr().err.lower()


def test_g_scan_pressure_root(tmp_path, capsys):
    # Pressure at fixed q = -1, kappa = 0 crosses zero exactly at g = 2.
    from finsleroid import pressure
    values = {g: pressure(g, 1.0, -1.0, 0.0) for g in (0.0, 1.0, 2.0)}
    assert values[0.0] < 0 and values[1.0] < 0
    assert values[2.0] == pytest.approx(0.0, abs=1e-14)
