import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from thermosolutal import report
from thermosolutal.bounds import (FixedChoices, FreeParameters, apriori_C_bounds, compute_d5, compute_d8,
                                  compute_N, compute_R, compute_R_sound, evaluate_ledger, f_data_bounds,
                                  prepare_inputs, theorem_bound, tune_free_parameters)
from thermosolutal.errors import InvalidFunctionError
from thermosolutal.harness import suite_scenarios
from thermosolutal.scenario import EquilibriumFunction, parse_equilibrium

T = np.linspace(0.0, 1.0, 1001)


def _knots(vals):
    """Piecewise-linear curve on ``T`` through values at equally spaced knots."""
    return np.interp(T, np.linspace(0.0, 1.0, len(vals)), vals)


@pytest.fixture(scope="module")
def suite32():
    return suite_scenarios(32, 1.0)


@pytest.fixture(scope="module")
def ref_inputs(suite, geo64):
    return prepare_inputs(suite["convective"], geo64)


# -- closed forms ---------------------------------------------------------------------

def test_d8_constant_source():
    assert compute_d8(T, 2.0, np.ones_like(T))[-1] == pytest.approx((math.e**2 - 1) / 2, rel=1e-6)


def test_d8_against_adaptive_quadrature():
    d6 = 1.0 + T**2
    for N in (-3.0, 0.5, 2.0):
        oracle = quad(lambda s: math.exp(N * (1.0 - s)) * (1.0 + s * s), 0.0, 1.0)[0]
        assert compute_d8(T, N, d6)[-1] == pytest.approx(oracle, rel=1e-5)


def test_R_closed_forms():
    assert compute_R(T, 1.0, np.zeros_like(T), 0.5).values[-1] == pytest.approx(math.e - 1, rel=1e-6)
    assert compute_R(T, 0.0, np.ones_like(T), 0.5).values[-1] == pytest.approx(2 * (math.exp(0.5) - 1), rel=1e-6)
    assert compute_R_sound(T, 1.0, np.zeros_like(T), 0.5).values[-1] == pytest.approx(math.e - 1, rel=1e-12)


def test_R_overflow_is_reported():
    r = compute_R(T, 2000.0, np.zeros_like(T), 0.5)
    assert np.isinf(r.values[-1]) and 0.3 < r.overflow_time < 0.4
    rs = compute_R_sound(T, 2000.0, np.zeros_like(T), 0.5)
    assert np.isinf(rs.values[-1]) and rs.overflow_time == pytest.approx(r.overflow_time, abs=2e-3)


@settings(max_examples=40, deadline=None)
@given(M=st.floats(0.0, 8.0), c=st.floats(0.0, 4.0))
def test_R_constant_rate(M, c):
    rate = M + 0.5 * c
    exact = math.expm1(rate) / rate if rate > 0 else 1.0
    assert compute_R(T, M, np.full_like(T, c), 0.5).values[-1] == pytest.approx(exact, rel=1e-5)


@settings(max_examples=40, deadline=None)
@given(M=st.floats(0.01, 6.0), incr=st.lists(st.floats(0.0, 2.0), min_size=20, max_size=20))
def test_R_sound_dominates_R_for_increasing_d10(M, incr):
    d10 = _knots(np.cumsum(incr))
    r, rs = compute_R(T, M, d10, 0.5).values, compute_R_sound(T, M, d10, 0.5).values
    assert np.all(rs >= r * (1 - 1e-6))
    assert np.all(np.diff(r) >= 0) and np.all(np.diff(rs) >= 0)


@settings(max_examples=40, deadline=None)
@given(N=st.floats(-20.0, 20.0), vals=st.lists(st.floats(0.0, 10.0), min_size=20, max_size=20))
def test_d8_nonnegative_and_increasing_for_increasing_d6(N, vals):
    d6 = _knots(np.maximum.accumulate(np.array(vals)))
    d8 = compute_d8(T, N, d6)
    assert np.all(d8 >= 0) and np.all(np.diff(d8) >= -1e-12 * (1 + d8[1:]))


def test_N_plug_in():
    # a = b = L = K = 1, h_m = 0, all free parameters 1:  N = 4 (-1 + 1/2 + 1/2 + 1/2) = 2
    assert compute_N(1.0, 1.0, 1.0, 1.0, 0.0, 2 * np.pi**2, FreeParameters()) == pytest.approx(2.0)


def test_d5_plug_in():
    assert compute_d5(0.0, 1.0, 1.0, 1.0, 2 * np.pi**2) == pytest.approx(1 / np.pi**2)


def test_f_bounds_tanh():
    d1, d2, f2, f4 = f_data_bounds(parse_equilibrium("tanh:2"), 1.0)
    assert d1 == pytest.approx(2.0, rel=1e-9)
    assert d2 == pytest.approx(np.tanh(2.0), rel=1e-12)
    assert f4 == pytest.approx(np.tanh(2.0) ** 4, rel=1e-12)


def test_f_bounds_rejects_non_finite():
    bad = EquilibriumFunction(lambda t: np.log(t), lambda t: 1 / t, "log")
    with np.errstate(all="ignore"), pytest.raises(InvalidFunctionError):
        f_data_bounds(bad, 1.0)


def test_theorem_bound_plug_in():
    assert theorem_bound(3.0, 2.0, 5.0, 0.1, 0.2) == pytest.approx(3.0 * (2.0 * 0.01 + 5.0 * 0.04))
    assert theorem_bound(np.inf, 1.0, 1.0, 0.0, 0.0) == 0.0


def test_C_bounds_nonpositive_N_branch():
    d6 = np.linspace(1.0, 2.0, 11)
    d8 = compute_d8(np.linspace(0, 1, 11), -1.0, d6)
    cb = apriori_C_bounds(-1.0, 2.0, d6, d8)
    assert cb.branch.startswith("N<=0")
    assert np.allclose(cb.C_sq, 2.0 * d6) and np.allclose(cb.int_grad_C_sq, 2.0 * d6)
    assert np.all(cb.literal_C_sq[1:] < 0)


def test_free_parameters_validation():
    with pytest.raises(ValueError):
        FreeParameters(gamma1=0.0)
    with pytest.raises(ValueError):
        FreeParameters.from_dict({"gamma9": 1.0})
    assert FreeParameters.from_dict({"delta1": 2}).delta1 == 2.0


def test_fixed_choices():
    fc = FixedChoices.from_model(a=2.0, b=1.0, L=3.0, K=2.0, h_m=0.0, L1=3.0, K1=2.0, d1=1.0)
    assert fc.lam == 0.5 and math.isinf(fc.omega2)
    assert fc.eps == pytest.approx((4.0 / 9.0) ** 0.75)
    assert fc.alpha_th == pytest.approx(2.0 / 3.0) and fc.mu == pytest.approx(4.0)


# -- the assembled ledger ----------------------------------------------------------------

def test_reference_ledger_values(ref_inputs):
    dc = evaluate_ledger(ref_inputs)
    assert dc.N == pytest.approx(2.0)
    assert dc.alpha1 == pytest.approx(2.0 * ref_inputs.d2**2)
    assert dc.M == pytest.approx(max(dc.M_branches))
    # alpha2 = (2 / a K1) sup of the pair-2 bound on ||C||^2
    assert dc.alpha2 == pytest.approx(2.0 * np.max(dc.c_bounds.C_sq))
    assert dc.R[-1] == pytest.approx(math.exp(0.5 * dc.d10[-1]) * math.expm1(dc.M) / dc.M, rel=1e-12)
    assert "h_m = 0" in dc.notes[0]


def test_literal_omega2_form_matches_substituted_term(ref_inputs, suite, geo64):
    dc = evaluate_ledger(prepare_inputs(suite["adversarial"], geo64))
    assert np.allclose(dc.literal["d6_advective_omega2_form"], dc.d6_terms["advective"])


def test_curves_are_monotone(suite32):
    for name, sc in suite32.items():
        dc = evaluate_ledger(prepare_inputs(sc, n_samples=200))
        for key in ("d6", "d8", "d9", "d10", "R"):
            c = getattr(dc, key)
            fin = np.isfinite(c)
            assert np.all(np.diff(c[fin]) >= -1e-12 * np.abs(c[fin][1:])), (name, key)


def test_time_quadrature_converges(suite, geo64):
    sc = suite["convective"]
    coarse = evaluate_ledger(prepare_inputs(sc, geo64, 1000))
    fine = evaluate_ledger(prepare_inputs(sc, geo64, 2000))
    assert coarse.d8[-1] == pytest.approx(fine.d8[-1], rel=5e-3)
    assert coarse.R[-1] == pytest.approx(fine.R[-1], rel=5e-3)


def test_ledger_json_round_trip(suite32):
    dc = evaluate_ledger(prepare_inputs(suite32["adversarial"], n_samples=100))
    text = report.dumps(dc.to_dict())
    data = json.loads(text)
    assert "inf" in (data["scalars"]["R_final"], data["scalars"]["objective"]) or np.isfinite(dc.R[-1])
    assert len(data["curves"]["t"]) == 101
    assert float(data["scalars"]["M"]) == dc.M


# -- tuner ----------------------------------------------------------------------------

def test_tuner_zero_objective_keeps_defaults(suite32):
    res = tune_free_parameters(prepare_inputs(suite32["zero"], n_samples=100))
    assert res.params == FreeParameters() and res.objective == 0.0


def test_tuner_descends(ref_inputs):
    res = tune_free_parameters(ref_inputs)
    assert res.objective <= res.objective_default and res.evaluations <= 500


def test_tuner_single_parameter_matches_sweep(ref_inputs):
    def obj(g1):
        return evaluate_ledger(ref_inputs, FreeParameters(gamma1=g1)).objective()

    sweep = 2.0 ** np.linspace(-8, 8, 321)
    best = min(obj(g) for g in sweep)
    res = tune_free_parameters(ref_inputs, active=["gamma1"])
    assert res.params.gamma1 < 1.0          # smaller gamma1 lowers N
    assert res.objective <= best * 1.001
    changed = res.params.as_dict()
    changed.pop("gamma1")
    assert all(v == 1.0 for v in changed.values())


def test_tuner_unknown_parameter(ref_inputs):
    with pytest.raises(ValueError):
        tune_free_parameters(ref_inputs, active=["nope"])
