"""Acceptance gate: one test, and one summary line, per criterion."""
import dataclasses
import time

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from thermosolutal.bounds import evaluate_ledger, prepare_inputs, tune_free_parameters
from thermosolutal.convection import max_temp_check, simulate
from thermosolutal.domain import Grid2D
from thermosolutal.elliptic import (check_lemma1, check_lemma2, harmonic_family, membrane_eigenvalue,
                                    rellich_constants, torsion_function)
from thermosolutal.harness import TwinSpec, ledger_checks, scaling_studies, sobolev_check, twin_batch
from thermosolutal.scenario import Profile, scenario_from_dict

TORSION_MAX = 0.0736713532815138     # series value, see test_elliptic.py
SUITE = ("zero", "constant-T", "convective", "reactive", "adversarial")

pytestmark = pytest.mark.slow


def _timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


@pytest.fixture(scope="module")
def grid128():
    return Grid2D(128, 128)


@pytest.fixture(scope="module")
def ledgers(suite, geo64):
    """Default and tuned constants for every suite scenario."""
    out = {}
    for name, sc in suite.items():
        inp = prepare_inputs(sc, geo64)
        tuned = tune_free_parameters(inp)
        out[name] = (inp, tuned, evaluate_ledger(inp), evaluate_ledger(inp, tuned.params))
    return out


def test_criterion_1_geometry_oracles(grid128, criterion):
    lam, t_lam = _timed(membrane_eigenvalue, grid128)
    tor, t_tor = _timed(torsion_function, grid128)
    e_lam = abs(lam / (2 * np.pi**2) - 1)
    e_tor = abs(tor.field.values.max() / TORSION_MAX - 1)
    ok = e_lam < 0.01 and e_tor < 0.01 and t_lam < 10 and t_tor < 10
    criterion(1, ok, f"lambda1 rel err {e_lam:.2e} ({t_lam:.2f}s), torsion max rel err {e_tor:.2e} ({t_tor:.2f}s)")
    assert ok


def test_criterion_2_lemma_battery(grid128, criterion):
    fam = harmonic_family(grid128)
    rc = rellich_constants(grid128, fam)
    tor = torsion_function(grid128)
    fails = [name for name, bv in fam
             if not (check_lemma1(bv, rc).passed and check_lemma2(bv, tor).passed)]
    ok = len(fam) == 20 and not fails
    criterion(2, ok, f"{len(fam)} harmonic polynomials, {len(fails)} failures, c2 inflation {rc.inflation:g}")
    assert ok, fails


def test_criterion_3_sobolev(grid128, criterion):
    rep, dt = _timed(sobolev_check, grid128, 100, seed=0)
    ok = rep.n_samples == 100 and bool(np.all(rep.ratios <= 1.02)) and dt < 30
    criterion(3, ok, f"worst ratio {rep.worst_ratio:.3f} over {rep.n_samples} fields ({dt:.1f}s)")
    assert ok


def test_criterion_4_maximum_principle(suite, suite_run, geo64, criterion):
    trajs, elapsed = suite_run
    worst = {}
    ok = set(trajs) == set(SUITE)
    for name, tr in trajs.items():
        chk = max_temp_check(tr, prepare_inputs(suite[name], geo64).T_m)
        worst[name] = chk.overshoot
        ok = ok and chk.passed
    ok = ok and elapsed < 120
    criterion(4, ok, f"max overshoot {max(worst.values()):.1e}, {elapsed:.0f}s for 5 scenarios")
    assert ok, worst
    assert elapsed < 120


def test_criterion_5_ledger_soundness(suite_run, ledgers, criterion):
    trajs, _ = suite_run
    fails, n = [], 0
    for name, (_, _, dc_default, dc_tuned) in ledgers.items():
        for label, dc in (("default", dc_default), ("tuned", dc_tuned)):
            for c in ledger_checks(trajs[name], dc):
                n += 1
                if not c.passed:
                    fails.append(f"{name}/{label}/{c.name}")
    criterion(5, not fails, f"{n} checks, {len(fails)} failures")
    assert not fails, fails


def test_criterion_6_theorem(suite, geo64, criterion):
    sc = suite["convective"]
    pairs = [(1.0, 1.0), (0.9, 1.0), (1.0, 0.9), (0.95, 0.95)]
    (reports, _), dt = _timed(twin_batch, sc, (1.0, 1.0), pairs, geometry=geo64)
    ident, *perturbed = reports
    ok = ident.max_F <= 1e-12 and all(r.passed for r in perturbed) and dt < 300
    ratios = ", ".join(f"({r.l:g},{r.k:g}) {r.max_ratio:.2e}" for r in perturbed)
    criterion(6, ok, f"identical F {ident.max_F:.1e}; max F/bound {ratios} ({dt:.0f}s)")
    assert ok


def test_criterion_7_quadratic_scaling(suite, geo64, criterion):
    spec = TwinSpec(suite["convective"], (1.0, 1.0), (0.9, 1.0))
    res, dt = _timed(scaling_studies, spec, [0.1, 0.05, 0.025], [(1, 0), (0, 1)], geometry=geo64)
    slopes = [r.slope for r in res]
    ok = all(abs(s - 2.0) <= 0.1 for s in slopes) and dt < 600
    criterion(7, ok, f"slope l {slopes[0]:.4f}, slope k {slopes[1]:.4f} ({dt:.0f}s)")
    assert ok


def test_criterion_8_ode_reduction(criterion):
    a, K, L, cf, C0 = 2.0, 1.5, 1.0, 0.7, 0.2
    oracle = solve_ivp(lambda t, c: (L * cf - K * c) / a, (0.0, 1.0), [C0], method="DOP853",
                       rtol=1e-13, atol=1e-15, dense_output=True)
    exact = lambda t: L * cf / K + (C0 - L * cf / K) * np.exp(-K * t / a)
    assert abs(oracle.y[0, -1] - exact(1.0)) < 1e-12
    sc = scenario_from_dict({"grid": {"nx": 16}, "params": {"a": a, "L": L, "K": K, "f": f"quadratic:{cf},0,0"},
                             "initial": {"C0": f"constant:{C0}"}, "boundary": {"h": f"constant:{C0}"},
                             "t_final": 1.0})
    # the boundary carries the exact uniform solution, which a config string cannot express
    sc = dataclasses.replace(sc, h=Profile(lambda x, y, t: exact(t) + 0 * x, "ode", True))
    tr = simulate(sc)
    err = float(np.max(np.abs(tr.final_state.C.values - oracle.sol(1.0)[0])))
    criterion(8, err < 1e-6, f"max |C - C_ode| at t=1: {err:.2e}")
    assert err < 1e-6


def test_criterion_9_tuner_descent(ledgers, criterion):
    rows = {name: (t.objective_default, t.objective) for name, (_, t, _, _) in ledgers.items()}
    ok = all(tuned <= default for default, tuned in rows.values())
    criterion(9, ok, "; ".join(f"{n} {d:.3g} -> {t:.3g}" for n, (d, t) in rows.items()))
    assert ok
