import json
from pathlib import Path

import pytest

from thermosolutal import cli
from thermosolutal.errors import BlowUpError

CONFIGS = Path(__file__).resolve().parents[1] / "demos" / "configs"


def run(tmp_path, *args):
    return cli.main(["--grid-override", "16", "--out", str(tmp_path), *args])


def test_verify_zero(tmp_path):
    assert run(tmp_path, "verify", str(CONFIGS / "zero.json")) == 0
    rep = json.loads((tmp_path / "zero_verify.json").read_text())
    assert rep["passed"] is True


def test_twin_identical(tmp_path):
    assert run(tmp_path, "twin", str(CONFIGS / "twin_identical.json")) == 0
    rep = json.loads((tmp_path / "twin_identical_twin.json").read_text())
    assert rep["max_F"] <= 1e-12


def test_scaling(tmp_path, capsys):
    assert run(tmp_path, "scaling", str(CONFIGS / "ref_twin.json"), "--factors", "0.1,0.05,0.025") == 0
    assert "slope = 2.0" in capsys.readouterr().out


def test_constants_and_solve_are_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert run(d, "constants", str(CONFIGS / "reactive.json"), "--tune") == 0
        assert run(d, "solve", str(CONFIGS / "reactive.json")) == 0
    for name in ("reactive_constants.json", "reactive_trajectory.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    data = json.loads((a / "reactive_constants.json").read_text())
    assert {"scalars", "curves", "free_parameters", "branches", "tuning"} <= set(data)


def test_sobolev(tmp_path):
    assert cli.main(["--out", str(tmp_path), "sobolev", "--grid", "32", "--samples", "5"]) == 0


def test_global_flags_after_subcommand(tmp_path):
    assert cli.main(["verify", str(CONFIGS / "zero.json"), "--grid-override", "16", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "zero_verify.json").exists()


def test_usage_errors(tmp_path, capsys):
    assert cli.main(["bogus"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"params": {"L": 1}}')
    assert cli.main(["solve", str(bad)]) == 2
    assert "params.K" in capsys.readouterr().err
    assert cli.main(["scaling", str(CONFIGS / "ref_twin.json"), "--factors", "0.1,x"]) == 2


def test_warns_on_large_perturbation(tmp_path, capsys):
    cfg = json.loads((CONFIGS / "ref_twin.json").read_text())
    cfg["coeffs2"] = {"L": 0.3, "K": 1.0}
    p = tmp_path / "big.json"
    p.write_text(json.dumps(cfg))
    run(tmp_path, "twin", str(p))
    assert "warning" in capsys.readouterr().err


def test_blow_up_exit_code(tmp_path, monkeypatch):
    def boom(*a, **k):
        raise BlowUpError("forced", 0.0)
    monkeypatch.setattr(cli, "simulate", boom)
    assert run(tmp_path, "solve", str(CONFIGS / "zero.json")) == 3
