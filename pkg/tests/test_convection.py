import csv
import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from thermosolutal.convection import (SolverOptions, TRAJECTORY_COLUMNS, initial_state, max_stable_dt,
                                      max_temp_check, run_lockstep, simulate, step)
from thermosolutal.errors import StepRejected
from thermosolutal.scenario import Profile, scenario_from_dict


def _sc(n=16, t_final=0.05, **cfg):
    base = {"grid": {"nx": n}, "params": {"L": 1, "K": 1}, "t_final": t_final}
    for k, v in cfg.items():
        base[k] = {**base.get(k, {}), **v} if isinstance(v, dict) else v
    return scenario_from_dict(base)


def test_step_rejects_unstable_dt():
    sc = _sc(initial={"T0": "sine-mode:1,1"})
    st0 = initial_state(sc)
    dt = max_stable_dt(st0, sc)
    with pytest.raises(StepRejected) as err:
        step(st0, sc, 2 * dt)
    assert err.value.suggested_dt == pytest.approx(dt)


def test_step_keeps_velocity_divergence_free():
    sc = _sc(initial={"T0": "sine-mode:1,2"})
    st0 = initial_state(sc)
    s = st0
    for _ in range(20):
        s = step(s, sc, max_stable_dt(s, sc))
    assert np.max(np.abs(s.v.divergence())) < 1e-10
    assert s.v.max_speed() > 0


def test_heat_probe_matches_separable_solution():
    # advection off, reaction negligible: both scalars solve the heat equation
    sc = scenario_from_dict({"grid": {"nx": 128}, "params": {"L": 1e-12, "K": 1e-12},
                             "initial": {"T0": "sine-mode:1,1", "C0": "sine-mode:1,1"}, "t_final": 0.1})
    tr = simulate(sc, SolverOptions(freeze_velocity=True, advect_scalars=False))
    X, Y = sc.grid.meshgrid()
    exact = np.exp(-2 * np.pi**2 * 0.1) * np.sin(np.pi * X) * np.sin(np.pi * Y)
    for q in (tr.final_state.T.values, tr.final_state.C.values):
        assert np.max(np.abs(q - exact)) / exact.max() < 0.01


def test_lockstep_matches_single_runs():
    a = _sc(initial={"T0": "sine-mode:1,1"})
    b = a.with_coefficients(2.0, 0.5, name="b")
    both = run_lockstep([a, b])
    # the shared step sequence is the same here because both have equal stability limits
    alone = simulate(b)
    assert np.allclose(both[1].norm_C_sq, alone.norm_C_sq, rtol=1e-12, atol=1e-15)


def test_trajectory_csv(tmp_path):
    tr = simulate(_sc(initial={"T0": "sine-mode:1,1"}, t_final=0.01))
    p = tr.write_csv(tmp_path / "t.csv")
    rows = list(csv.reader(p.open()))
    assert tuple(rows[0]) == TRAJECTORY_COLUMNS
    assert len(rows) == len(tr) + 1
    assert float(rows[-1][0]) == pytest.approx(0.01)
    assert tr.int_grad_C_sq[0] == 0 and np.all(np.diff(tr.int_C_sq) >= 0)


def test_zero_scenario_stays_zero():
    tr = simulate(_sc())
    assert np.max(tr.sup_T) == 0 and np.max(tr.norm_v_sq) == 0 and np.max(tr.norm_C_sq) == 0


@settings(max_examples=6, deadline=None)
@given(amp=st.floats(0.1, 3.0), g=st.floats(-2.0, 2.0), mode=st.integers(1, 3))
def test_discrete_maximum_principle(amp, g, mode):
    sc = _sc(n=16, t_final=0.05, initial={"T0": f"sine-mode:{mode},1,{amp}"},
             boundary={"g": f"ramp:0,0.02,{g}"})
    tr = simulate(sc)
    T_m = max(float(np.max(np.abs(sc.T0_field().values))), abs(g))
    assert max_temp_check(tr, T_m).passed


def test_uniform_state_follows_reaction_ode():
    a, K, L, cf, C0 = 2.0, 1.5, 1.0, 0.7, 0.2
    exact = lambda t: L * cf / K + (C0 - L * cf / K) * np.exp(-K * t / a)
    sc = scenario_from_dict({"grid": {"nx": 16}, "params": {"a": a, "L": L, "K": K, "f": f"quadratic:{cf},0,0"},
                             "initial": {"C0": f"constant:{C0}"}, "boundary": {"h": f"constant:{C0}"},
                             "t_final": 0.2})
    sc = dataclasses.replace(sc, h=Profile(lambda x, y, t: exact(t) + 0 * x, "ode", True))
    tr = simulate(sc)
    assert np.max(np.abs(tr.final_state.C.values - exact(0.2))) < 1e-6


@pytest.mark.slow
def test_refinement_is_second_order():
    # successive ||C(T)||^2 differences on 64^2, 128^2, 256^2; short horizon keeps 256^2 affordable
    from thermosolutal.harness import suite_scenarios
    vals = [simulate(suite_scenarios(n, 0.01)["reactive"]).norm_C_sq[-1] for n in (64, 128, 256)]
    ratio = abs(vals[0] - vals[1]) / abs(vals[1] - vals[2])
    assert 3.5 <= ratio <= 4.5
