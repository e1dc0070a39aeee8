import json

import numpy as np
import pytest

from thermosolutal.domain import Grid2D
from thermosolutal.errors import ConfigError
from thermosolutal.scenario import load_scenario, parse_equilibrium, parse_profile, scenario_from_dict


def test_defaults():
    sc = scenario_from_dict({"params": {"L": 1, "K": 2}})
    assert sc.grid == Grid2D(64, 64)
    assert (sc.params.a, sc.params.b, sc.params.L, sc.params.K) == (1.0, 1.0, 1.0, 2.0)
    assert sc.t_final == 1.0
    assert np.all(sc.T0_field().values == 0)


def test_missing_coefficient_names_field():
    with pytest.raises(ConfigError, match="params.K"):
        scenario_from_dict({"params": {"L": 1}})


def test_negative_coefficient():
    with pytest.raises(ConfigError, match="params.a"):
        scenario_from_dict({"params": {"L": 1, "K": 1, "a": -1}})


def test_json_syntax_error_has_line(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"params":\n  {"L": 1,}}')
    with pytest.raises(ConfigError, match="line 2"):
        load_scenario(p)


def test_incompatible_initial_boundary_data():
    with pytest.raises((ConfigError, ValueError)):
        scenario_from_dict({"params": {"L": 1, "K": 1}, "initial": {"T0": "constant:1"}})


def test_profiles():
    g = Grid2D(16, 16)
    ramp = parse_profile("ramp:0,0.5,2", g)
    assert ramp.trace(g, 0.0).sup() == 0.0
    assert ramp.trace(g, 0.25).sup() == pytest.approx(1.0)
    assert ramp.trace(g, 1.0).sup() == pytest.approx(2.0)
    sm = parse_profile("sine-mode:1,1", g).field(g)
    # largest value at the cell centres next to the middle, x = y = 7.5 / 16
    assert sm.sup() == pytest.approx(np.sin(np.pi * 7.5 / 16) ** 2, rel=1e-12)
    with pytest.raises(ConfigError):
        parse_profile("wobble:3", g)


def test_equilibrium_functions():
    t = np.linspace(-1, 1, 5)
    f = parse_equilibrium("tanh:2")
    assert np.allclose(f.eval(t), np.tanh(2 * t))
    assert np.allclose(f.deriv(t), 2 / np.cosh(2 * t) ** 2)
    q = parse_equilibrium("quadratic:0,0.5,0.5")
    assert np.allclose(q.deriv(t), 0.5 + t)


def test_with_grid_keeps_data(tmp_path):
    p = tmp_path / "s.json"
    p.write_text(json.dumps({"params": {"L": 1, "K": 1}, "initial": {"T0": "sine-mode:1,1"}}))
    sc = load_scenario(p).with_grid(16)
    assert sc.grid.nx == 16 and sc.name == "s"
