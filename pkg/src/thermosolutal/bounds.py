"""
A priori constant ledger for the reacting convection model.

Every constant is computed from data only: the geometry constants of the
domain, the initial fields, boundary data sampled on a uniform time grid,
the equilibrium function and the model coefficients.  The solution of the
PDE is never consulted.

Two families of curves are produced.  The *sound* forms are the ones that
follow from the energy identities with every constant tracked; they are
the ones used by the checks.  The *literal* forms transcribe the displayed
formulas term by term and are emitted alongside for comparison (several of
them do not dominate the quantity they are meant to bound, see
``DataConstants.notes``).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.signal import lfilter

from .domain import (BoundaryTrace, Grid2D, ScalarField, l2_norm_sq, l4_norm_4, tangential_derivative,
                     velocity_l2_norm_sq)
from .elliptic import GeometryConstants, geometry_constants
from .errors import InvalidFunctionError
from .scenario import EquilibriumFunction, Profile, Scenario

__all__ = [
    "FreeParameters",
    "FixedChoices",
    "BoundaryQuadratures",
    "LedgerInputs",
    "DataConstants",
    "TuneResult",
    "compute_Tm",
    "f_data_bounds",
    "compute_d4",
    "compute_d5",
    "compute_d6",
    "compute_N",
    "compute_d8",
    "apriori_C_bounds",
    "compute_d9",
    "compute_M",
    "compute_alphas",
    "compute_R",
    "compute_R_sound",
    "theorem_bound",
    "prepare_inputs",
    "evaluate_ledger",
    "compute_ledger",
    "tune_free_parameters",
]

EXP_LIMIT = 700.0


@dataclass(frozen=True)
class FreeParameters:
    """Weights of the weighted arithmetic-geometric mean steps.

    Any positive choice gives valid bounds; the defaults are all 1.
    """

    gamma1: float = 1.0
    gamma2: float = 1.0
    zeta3: float = 1.0
    omega1: float = 1.0
    eps1: float = 1.0
    eps2: float = 1.0
    delta1: float = 1.0

    def __post_init__(self):
        for k, v in asdict(self).items():
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"free parameter {k} must be a positive finite number, got {v}")

    @classmethod
    def names(cls) -> tuple[str, ...]:
        return tuple(cls.__dataclass_fields__)

    def as_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "FreeParameters":
        unknown = set(d) - set(cls.names())
        if unknown:
            raise ValueError(f"unknown free parameters: {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in d.items()})


@dataclass(frozen=True)
class FixedChoices:
    """Constants fixed by explicit choices in the estimates."""

    lam: float
    omega2: float
    eps: float
    alpha_th: float
    beta_th: float
    gamma_th: float
    zeta_th: float
    mu: float

    @classmethod
    def from_model(cls, a: float, b: float, L: float, K: float, h_m: float,
                   L1: float, K1: float, d1: float) -> "FixedChoices":
        return cls(
            lam=0.5,
            omega2=1.0 / (b * h_m) if h_m > 0 else math.inf,
            eps=(2.0 * K / (3.0 * L)) ** 0.75,
            alpha_th=K1 / (L1 * d1) if d1 > 0 else math.inf,
            beta_th=K1 / 2.0,
            gamma_th=K1 / 2.0,
            zeta_th=2.0 / b,
            mu=2.0 * a / b**2,
        )


# -- data functionals ------------------------------------------------------

def compute_Tm(T0: ScalarField, g: Profile, times: np.ndarray) -> float:
    """``max(||T0||_inf, sup_t ||g(t)||_inf)`` over the sampled times."""
    grid = T0.grid
    sup_g = max((float(np.max(np.abs(g.trace(grid, t).values))) for t in times), default=0.0)
    return max(float(np.max(np.abs(T0.values))), sup_g)


def f_data_bounds(f: EquilibriumFunction, T_m: float, n: int = 10_000,
                  refinements: int = 2) -> tuple[float, float, float, float]:
    """``(d1, d2, sup f^2, sup f^4)`` with ``d1 = max |f'|``, ``d2 = max |f|`` on ``[-T_m, T_m]``.

    Dense sampling followed by ``refinements`` local resamplings of the
    bracket around each sampled maximiser.
    """
    T_m = abs(float(T_m))

    def sup_abs(fun):
        x = np.linspace(-T_m, T_m, n) if T_m > 0 else np.zeros(1)
        y = np.abs(np.asarray(fun(x), dtype=float) + 0.0 * x)
        if not np.all(np.isfinite(y)):
            raise InvalidFunctionError(f"{f.description} is not finite on [-{T_m}, {T_m}]")
        best = float(np.max(y))
        for _ in range(refinements if T_m > 0 else 0):
            k = int(np.argmax(y))
            lo, hi = x[max(k - 1, 0)], x[min(k + 1, len(x) - 1)]
            x = np.linspace(lo, hi, 101)
            y = np.abs(np.asarray(fun(x), dtype=float) + 0.0 * x)
            best = max(best, float(np.max(y)))
        return best

    d1 = sup_abs(f.deriv)
    d2 = sup_abs(f.eval)
    return d1, d2, d2**2, d2**4


def compute_d4(d2: float, m: float, t_final: float, power: int = 2) -> float:
    """Bound on ``int_0^T ||f(T)||_p^p`` from ``|f(T)| <= d2`` pointwise."""
    return t_final * m * d2**power


def compute_d5(norm_v0_sq: float, m: float, t_final: float, T_m: float, lambda1: float) -> float:
    return norm_v0_sq + 2.0 * m * t_final * T_m**2 / lambda1


def _scaled(c: float, arr: np.ndarray) -> np.ndarray:
    """``c * arr`` with a zero coefficient giving zero even where ``arr`` is infinite."""
    return np.zeros_like(arr) if c == 0 else c * arr


def _cumtrapz(y: np.ndarray, t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(y, dtype=float)
    out[1:] = np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(t))
    return out


@dataclass(frozen=True)
class BoundaryQuadratures:
    """Boundary integrals of the concentration data on the time grid.

    Arrays are indexed by time sample.  ``h_t`` is the time derivative
    (central differences on the grid), ``ds`` the tangential derivative.
    """

    times: np.ndarray
    h2: np.ndarray           # oint h^2
    h6: np.ndarray           # oint h^6
    ht2: np.ndarray          # oint h_t^2
    hs2: np.ndarray          # oint |d_s h|^2
    h3s2: np.ndarray         # oint |d_s h^3|^2
    h3t2: np.ndarray         # oint (d_t h^3)^2
    h_m: float

    def integral(self, name: str) -> np.ndarray:
        """Cumulative ``int_0^t`` of one of the arrays."""
        return _cumtrapz(getattr(self, name), self.times)

    def running_max(self, name: str) -> np.ndarray:
        return np.maximum.accumulate(getattr(self, name))


def boundary_quadratures(grid: Grid2D, h: Profile, times: np.ndarray) -> BoundaryQuadratures:
    times = np.asarray(times, dtype=float)
    w = grid.boundary_weights
    vals = np.stack([h.trace(grid, t).values for t in times])
    cube = vals**3

    def ds(rows):
        return np.stack([tangential_derivative(BoundaryTrace(grid, r)).values for r in rows])

    if len(times) > 1 and h.time_dependent:
        ht = np.gradient(vals, times, axis=0)
        h3t = np.gradient(cube, times, axis=0)
    else:
        ht = np.zeros_like(vals)
        h3t = np.zeros_like(vals)
    return BoundaryQuadratures(
        times=times,
        h2=(vals**2) @ w,
        h6=(cube**2) @ w,
        ht2=(ht**2) @ w,
        hs2=(ds(vals) ** 2) @ w,
        h3s2=(ds(cube) ** 2) @ w,
        h3t2=(h3t**2) @ w,
        h_m=float(np.max(np.abs(vals))) if vals.size else 0.0,
    )


# -- the estimate chain -----------------------------------------------------

def compute_N(a: float, b: float, K: float, L: float, h_m: float, lambda1: float,
              fp: FreeParameters) -> float:
    """Growth rate of the Gronwall step for ``int ||C||^2``; either sign."""
    return (4.0 / a) * (-K + a / (2.0 * fp.omega1) + (h_m * b / lambda1) ** 2
                        + L * fp.gamma1 / 2.0 + K / (2.0 * fp.zeta3))


def compute_d6(a: float, b: float, L: float, K: float, norm_C0_sq: float, quad: BoundaryQuadratures,
               geo: GeometryConstants, d4: float, d5: float,
               fp: FreeParameters) -> tuple[np.ndarray, dict, np.ndarray]:
    """Data term of the ``||C||^2`` estimate.

    Returns ``(d6, terms, d6_literal)``.  ``terms`` maps each summand to its
    curve.  The sound form keeps the ``||H(0)||^2`` and ``||H(t)||^2``
    contributions separate (weights ``a/2`` and ``a/(2 lam) = a``) and uses
    the running maximum of ``oint h^2`` so the curve is non-decreasing.
    The literal form uses ``(3/2) psi1 oint h^2`` at time t instead.
    """
    psi1 = geo.psi1
    n = len(quad.times)
    ones = np.ones(n)
    int_h2 = quad.integral("h2")
    terms = {
        "initial_C": a * norm_C0_sq * ones,
        "H_initial": 0.5 * a * psi1 * quad.h2[0] * ones,
        "H_current": a * psi1 * quad.running_max("h2"),
        # b h_m d5 / (2 omega2 lambda1) with omega2 = 1 / (b h_m)
        "advective": (b * quad.h_m) ** 2 * d5 / (2.0 * geo.lambda1) * ones,
        "reaction": 0.5 * L * d4 * (1.0 / fp.gamma1 + 1.0 / fp.gamma2) * ones,
        "H_time": 0.5 * fp.omega1 * a * psi1 * quad.integral("ht2"),
        "rellich": np.sqrt(geo.c2 / geo.c1 * int_h2 * quad.integral("hs2")),
        "H_mass": (0.5 * L * fp.gamma2 * psi1 + 0.5 * psi1 * K * fp.zeta3) * int_h2,
    }
    d6 = sum(terms.values())
    literal = (d6 - terms["H_initial"] - terms["H_current"]) + 1.5 * psi1 * quad.h2
    return d6, terms, literal


def compute_d8(times: np.ndarray, N: float, d6: np.ndarray) -> np.ndarray:
    """``int_0^t exp(N (t - s)) d6(s) ds`` by the trapezoid rule on each step.

    Uses the exact propagation of the kernel across a step, which for a
    uniform grid is a first-order linear recursion.
    """
    times = np.asarray(times, dtype=float)
    d6 = np.asarray(d6, dtype=float)
    if len(times) < 2:
        return np.zeros_like(d6)
    dt = np.diff(times)
    if not np.allclose(dt, dt[0], rtol=1e-9, atol=0.0):
        raise ValueError("d8 needs a uniform time grid")
    h = float(dt[0])
    q = math.exp(N * h) if N * h < EXP_LIMIT else math.inf
    if not math.isfinite(q):
        return np.full_like(d6, math.inf)
    x = np.zeros_like(d6)
    x[1:] = 0.5 * h * (q * d6[:-1] + d6[1:])
    with np.errstate(over="ignore", invalid="ignore"):
        return lfilter([1.0], [1.0, -q], x)


@dataclass(frozen=True)
class CBounds:
    """Bounds on ``||C||^2``, ``int ||grad C||^2`` and ``int ||C||^2``."""

    C_sq: np.ndarray
    int_grad_C_sq: np.ndarray
    int_C_sq: np.ndarray
    literal_C_sq: np.ndarray
    literal_int_grad_C_sq: np.ndarray
    literal_int_C_sq: np.ndarray
    branch: str


def apriori_C_bounds(N: float, a: float, d6: np.ndarray, d8: np.ndarray) -> CBounds:
    """Concentration bounds from ``(a/4)||C||^2 + (1/2) int ||grad C||^2 <= d6 + (N a / 4) int ||C||^2``.

    Integrating once gives ``int ||C||^2 <= (4/a) d8``.  For ``N > 0`` this
    is substituted back; for ``N <= 0`` the integral term is dropped.
    """
    d6 = np.asarray(d6, dtype=float)
    d8 = np.asarray(d8, dtype=float)
    int_C = 4.0 / a * d8
    if N > 0:
        C_sq = 4.0 / a * (d6 + N * d8)
        grad = 2.0 * d6 + 2.0 * N * d8
        branch = "N>0"
    else:
        C_sq = 4.0 * d6 / a
        grad = 2.0 * d6
        branch = "N<=0: integral term dropped"
    return CBounds(C_sq, grad, int_C, N * d8, N * a * d8 / 2.0, d8.copy(), branch)


def compute_d9(a: float, b: float, L: float, K: float, norm_C0_sq: float, norm_C0_4: float,
               quad: BoundaryQuadratures, geo: GeometryConstants, m: float, t_final: float,
               d2: float, d4: float, d5: float, cb: CBounds, N: float, d8: np.ndarray,
               fp: FreeParameters) -> tuple[np.ndarray, dict, np.ndarray]:
    """Data term of the ``||C||_4^4`` estimate: returns ``(d9, terms, d9_literal)``.

    ``terms`` holds the summands of ``(a/4) d9``.  With
    ``eps = (2K/3L)^(3/4)`` the ``int ||C||_4^4`` contribution of the
    reaction term is absorbed by half of the decay term.
    """
    psi1, lam1 = geo.psi1, geo.lambda1
    eps = (2.0 * K / (3.0 * L)) ** 0.75
    ones = np.ones(len(quad.times))
    int_h6 = quad.integral("h6")
    terms = {
        "initial_C": (0.25 * a * norm_C0_4 + 0.5 * a * norm_C0_sq + 0.5 * a * psi1 * quad.h6[0]) * ones,
        "current_C": 0.5 * a * fp.delta1 * cb.C_sq,
        "I_current": a / (2.0 * fp.delta1) * psi1 * quad.running_max("h6"),
        "I_time": a * np.sqrt(psi1 * cb.int_C_sq * quad.integral("h3t2")),
        "rellich": math.sqrt(geo.c2 / geo.c1) * _cumtrapz(np.sqrt(quad.h2 * quad.h3s2), quad.times),
        "reaction_quartic": L / (4.0 * eps**4) * compute_d4(d2, m, t_final, power=4) * ones,
        "reaction": L / (2.0 * fp.eps1) * d4 * ones,
        "I_mass": (0.5 * fp.eps1 * L + K / (2.0 * fp.eps2)) * psi1 * int_h6,
        "decay": 0.5 * K * fp.eps2 * cb.int_C_sq,
        "advective": _scaled(quad.h_m**3 * b,
                             np.sqrt(cb.int_grad_C_sq * (d5 / lam1 + 2.0 / lam1**2 * cb.int_C_sq))),
    }
    d9 = 4.0 / a * sum(terms.values())

    # literal transcription with the literal C bounds plugged in
    lit_grad = np.maximum(cb.literal_int_grad_C_sq, 0.0)
    lit = (0.75 * a * norm_C0_sq
           + 0.5 * a * fp.delta1 * cb.literal_C_sq
           + (a / (2.0 * fp.delta1) + 0.5 * a) * psi1 * quad.h6
           + math.sqrt(psi1) * np.sqrt(d8 * quad.integral("h3t2") / 9.0)
           + terms["rellich"] + terms["reaction_quartic"] + terms["reaction"] + terms["I_mass"]
           + 0.5 * K * fp.eps2 * d8
           + _scaled(quad.h_m**3 * b, np.sqrt(lit_grad * (d5 / lam1 + 2.0 / lam1**2 * d8))))
    return d9, terms, 4.0 / a * lit


def compute_M(omega1_sob: float, b: float, a: float, d9_sup: float, T_m: float, lambda1: float,
              L1: float, K1: float, d1: float) -> tuple[float, tuple[float, float]]:
    """Growth rate of the difference energy; returns ``(M, (branch1, branch2))``."""
    first = omega1_sob * b**4 * d9_sup / (8.0 * a**2) + T_m**2 / 2.0
    second = 4.0 / lambda1 + L1**2 * d1**2 / (a * K1)
    return max(first, second), (first, second)


def compute_alphas(a: float, K1: float, sup_f2: float, m: float, C2_sq_sup: float) -> tuple[float, float]:
    """Coefficients of ``l^2`` and ``k^2``: ``||f(T2)||^2 <= m d2^2`` and the a priori ``||C2||^2`` bound."""
    return 2.0 / (a * K1) * m * sup_f2, 2.0 / (a * K1) * C2_sq_sup


@dataclass(frozen=True)
class RCurve:
    values: np.ndarray
    overflow_time: float | None = None


def compute_R(times: np.ndarray, M: float, d10: np.ndarray, omega1_sob: float) -> RCurve:
    """``R(t) = int_0^t exp[M (t-s) + Omega1 int_s^t d10(y) dy] ds`` (trapezoid rules).

    Evaluated in log space; samples whose logarithm exceeds the double
    range are returned as ``inf`` and the first such time is reported.
    """
    times = np.asarray(times, dtype=float)
    d10 = np.asarray(d10, dtype=float)
    if not math.isfinite(M):
        return RCurve(np.where(times > 0, math.inf, 0.0), float(times[min(1, len(times) - 1)]))
    bad = ~np.isfinite(d10)
    if np.any(bad):
        # an infinite rate makes R infinite from that sample on
        j = int(np.argmax(bad))
        head = compute_R(times[:j], M, d10[:j], omega1_sob) if j > 1 else RCurve(np.zeros(j))
        vals = np.concatenate([head.values, np.full(len(times) - j, math.inf)])
        t_over = head.overflow_time if head.overflow_time is not None else float(times[j])
        return RCurve(vals, t_over)
    P = _cumtrapz(M + omega1_sob * d10, times)    # exponent primitive
    n = len(times)
    R = np.zeros(n)
    if n < 2:
        return RCurve(R)
    h = np.diff(times)
    # trapezoid in s on [0, t_i] of exp(P_i - P_s)
    w_left = np.concatenate([[0.0], 0.5 * h])      # weight of node j from its left interval
    w_right = np.concatenate([0.5 * h, [0.0]])     # weight of node j from its right interval
    with np.errstate(divide="ignore"):
        # nodes j < i get both weights; node i only its left weight
        logs_full = np.log(w_left + w_right) - P
        acc = np.logaddexp.accumulate(np.concatenate([[-np.inf], logs_full[:-1]]))
        log_last = np.log(w_left) - P
        logR = np.logaddexp(acc, log_last) + P
    logR[0] = -np.inf
    over = logR > EXP_LIMIT
    with np.errstate(over="ignore"):
        R = np.where(over, np.inf, np.exp(np.minimum(logR, EXP_LIMIT)))
    R[0] = 0.0
    t_over = float(times[np.argmax(over)]) if np.any(over) else None
    return RCurve(R, t_over)


def compute_R_sound(times: np.ndarray, M: float, d10: np.ndarray, omega1_sob: float) -> RCurve:
    """Integrating-factor bound ``exp(Omega1 d10(t)) (exp(M t) - 1) / M``.

    ``d10`` bounds the time integral of ``||grad u||^2`` itself, so it
    bounds ``int_s^t ||grad u||^2`` for every ``s`` directly.
    """
    times = np.asarray(times, dtype=float)
    d10 = np.asarray(d10, dtype=float)
    if not math.isfinite(M):
        return RCurve(np.where(times > 0, math.inf, 0.0), float(times[min(1, len(times) - 1)]))
    if M > 0:
        log_gr = np.log(np.expm1(np.minimum(M * times, EXP_LIMIT)) / M, where=times > 0,
                        out=np.full_like(times, -np.inf))
        log_gr = np.where(M * times > EXP_LIMIT, M * times - math.log(M), log_gr)
    else:
        with np.errstate(divide="ignore"):
            log_gr = np.log(times)
    logR = log_gr + omega1_sob * d10
    over = ~(logR <= EXP_LIMIT) & (times > 0)
    with np.errstate(over="ignore"):
        R = np.where(over, np.inf, np.exp(np.minimum(logR, EXP_LIMIT)))
    R[times == 0] = 0.0
    t_over = float(times[np.argmax(over)]) if np.any(over) else None
    return RCurve(R, t_over)


def theorem_bound(R, alpha1: float, alpha2: float, l: float, k: float):
    """``R (alpha1 l^2 + alpha2 k^2)``; ``R`` may be a scalar or a curve."""
    c = alpha1 * l**2 + alpha2 * k**2
    R = np.asarray(R, dtype=float)
    if c == 0:
        return np.zeros_like(R) if R.ndim else 0.0
    out = R * c
    return out if out.ndim else float(out)


# -- assembling the ledger -----------------------------------------------------

@dataclass(frozen=True, eq=False)
class LedgerInputs:
    """Everything the ledger needs that does not depend on the free parameters."""

    times: np.ndarray
    a: float
    b: float
    L1: float
    K1: float
    L2: float
    K2: float
    m: float
    t_final: float
    T_m: float
    d1: float
    d2: float
    sup_f2: float
    sup_f4: float
    d4: float
    d5: float
    norm_v0_sq: float
    norm_C0_sq: float
    norm_C0_4: float
    quad: BoundaryQuadratures
    geometry: GeometryConstants

    @property
    def h_m(self) -> float:
        return self.quad.h_m


def prepare_inputs(sc: Scenario, geometry: GeometryConstants | None = None, n_samples: int = 1000,
                   coeffs2: tuple[float, float] | None = None) -> LedgerInputs:
    """Sample the data of ``sc`` on ``n_samples + 1`` uniform times.

    ``coeffs2`` is the second reaction pair ``(L2, K2)`` of a difference
    experiment; by default it equals the scenario's own pair.
    """
    if n_samples < 2:
        raise ValueError("need at least 2 time samples")
    grid = sc.grid
    geo = geometry or geometry_constants(grid)
    times = np.linspace(0.0, sc.t_final, n_samples + 1)
    prm = sc.params
    L2, K2 = coeffs2 if coeffs2 is not None else (prm.L, prm.K)
    T_m = compute_Tm(sc.T0_field(), sc.g, times)
    d1, d2, f2, f4 = f_data_bounds(prm.f, T_m)
    m = grid.measure
    C0 = sc.C0_field()
    nv0 = velocity_l2_norm_sq(sc.v0)
    return LedgerInputs(
        times=times, a=prm.a, b=prm.b, L1=prm.L, K1=prm.K, L2=float(L2), K2=float(K2),
        m=m, t_final=sc.t_final, T_m=T_m, d1=d1, d2=d2, sup_f2=f2, sup_f4=f4,
        d4=compute_d4(d2, m, sc.t_final), d5=compute_d5(nv0, m, sc.t_final, T_m, geo.lambda1),
        norm_v0_sq=nv0, norm_C0_sq=l2_norm_sq(C0), norm_C0_4=l4_norm_4(C0),
        quad=boundary_quadratures(grid, sc.h, times), geometry=geo,
    )


@dataclass(frozen=True, eq=False)
class DataConstants:
    """The full ledger: scalars, curves on ``times`` and diagnostics."""

    inputs: LedgerInputs
    free: FreeParameters
    fixed: FixedChoices
    N: float
    d6: np.ndarray
    d6_terms: dict
    d8: np.ndarray
    c_bounds: CBounds
    d9: np.ndarray
    d9_terms: dict
    d10: np.ndarray
    M: float
    M_branches: tuple
    alpha1: float
    alpha2: float
    R: np.ndarray
    R_overflow_time: float | None
    R_literal: np.ndarray
    R_literal_overflow_time: float | None
    N2: float
    C2_sq_sup: float
    literal: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def times(self) -> np.ndarray:
        return self.inputs.times

    @property
    def geometry(self) -> GeometryConstants:
        return self.inputs.geometry

    def objective(self) -> float:
        """``R(T) (alpha1 + alpha2)``, the quantity minimised by the tuner."""
        c = self.alpha1 + self.alpha2
        if c == 0:
            return 0.0
        return float(self.R[-1] * c)

    def bound_at(self, t, l: float, k: float):
        """Theorem bound interpolated to times ``t``."""
        R = np.interp(t, self.times, self.R)
        return theorem_bound(R, self.alpha1, self.alpha2, l, k)

    def scalars(self) -> dict:
        inp, geo = self.inputs, self.geometry
        return {
            "T_m": inp.T_m, "h_m": inp.h_m, "m": inp.m, "d1": inp.d1, "d2": inp.d2,
            "d4": inp.d4, "d5": inp.d5, "N": self.N, "M": self.M, "alpha1": self.alpha1,
            "alpha2": self.alpha2, "Omega1": geo.omega_sob, "lambda1": geo.lambda1,
            "psi1": geo.psi1, "c1": geo.c1, "c2": geo.c2, "rellich_inflation": geo.rellich_inflation,
            "M_branch_1": self.M_branches[0], "M_branch_2": self.M_branches[1],
            "N_pair2": self.N2, "sup_C2_sq_bound": self.C2_sq_sup,
            "R_final": float(self.R[-1]), "objective": self.objective(),
        }

    def curves(self) -> dict:
        cb = self.c_bounds
        out = {
            "t": self.times, "d6": self.d6, "d8": self.d8, "d9": self.d9, "d10": self.d10,
            "bound_C_sq": cb.C_sq, "bound_int_grad_C_sq": cb.int_grad_C_sq,
            "bound_int_C_sq": cb.int_C_sq, "R": self.R, "R_literal_kernel": self.R_literal,
        }
        out.update({f"d6_term_{k}": v for k, v in self.d6_terms.items()})
        out.update({f"d9_term_{k}": v for k, v in self.d9_terms.items()})
        out.update({f"literal_{k}": v for k, v in self.literal.items()})
        return out

    def to_dict(self) -> dict:
        return {
            "scalars": self.scalars(),
            "free_parameters": self.free.as_dict(),
            "fixed_choices": asdict(self.fixed),
            "coefficients": {"L1": self.inputs.L1, "K1": self.inputs.K1,
                             "L2": self.inputs.L2, "K2": self.inputs.K2},
            "branches": {"C_bounds": self.c_bounds.branch,
                         "R_overflow_time": self.R_overflow_time,
                         "R_literal_overflow_time": self.R_literal_overflow_time},
            "notes": list(self.notes),
            "curves": {k: np.asarray(v) for k, v in self.curves().items()},
        }


def _c_chain(inp: LedgerInputs, L: float, K: float, fp: FreeParameters):
    geo = inp.geometry
    N = compute_N(inp.a, inp.b, K, L, inp.h_m, geo.lambda1, fp)
    d6, terms, d6_lit = compute_d6(inp.a, inp.b, L, K, inp.norm_C0_sq, inp.quad, geo, inp.d4, inp.d5, fp)
    d8 = compute_d8(inp.times, N, d6)
    return N, d6, terms, d6_lit, d8, apriori_C_bounds(N, inp.a, d6, d8)


def evaluate_ledger(inp: LedgerInputs, fp: FreeParameters = FreeParameters()) -> DataConstants:
    """Assemble every constant for one choice of the free parameters.

    Extreme parameter choices may make some curves infinite; that is a
    valid (useless) bound and is propagated rather than raised.
    """
    with np.errstate(over="ignore", invalid="ignore"):
        return _evaluate(inp, fp)


def _evaluate(inp: LedgerInputs, fp: FreeParameters) -> DataConstants:
    geo = inp.geometry
    a, b, L1, K1 = inp.a, inp.b, inp.L1, inp.K1
    notes = []
    if inp.h_m == 0:
        notes.append("h_m = 0: omega2 = 1/(b h_m) is undefined; the advective H-term vanishes "
                     "because h = 0 forces H = 0")
    N, d6, d6_terms, d6_lit, d8, cb = _c_chain(inp, L1, K1, fp)
    if N <= 0:
        notes.append("N <= 0: C bounds taken from d6 alone; literal N d8 forms are not bounds")
    if (inp.L2, inp.K2) == (L1, K1):
        N2, cb2 = N, cb
    else:
        N2, *_, cb2 = _c_chain(inp, inp.L2, inp.K2, fp)
    d9, d9_terms, d9_lit = compute_d9(a, b, L1, K1, inp.norm_C0_sq, inp.norm_C0_4, inp.quad, geo,
                                      inp.m, inp.t_final, inp.d2, inp.d4, inp.d5, cb, N, d8, fp)
    d10 = inp.d5 + 2.0 / geo.lambda1 * cb.int_C_sq
    d10_lit = inp.d5 + 2.0 / geo.lambda1 * d8
    M, branches = compute_M(geo.omega_sob, b, a, float(np.max(d9)), inp.T_m, geo.lambda1, L1, K1, inp.d1)
    C2_sup = float(np.max(cb2.C_sq))
    alpha1, alpha2 = compute_alphas(a, K1, inp.sup_f2, inp.m, C2_sup)
    R = compute_R_sound(inp.times, M, d10, geo.omega_sob)
    R_lit = compute_R(inp.times, M, d10, geo.omega_sob)
    M_lit, _ = compute_M(geo.omega_sob, b, a, float(np.nanmax(d9_lit)), inp.T_m, geo.lambda1, L1, K1, inp.d1)
    if R.overflow_time is not None:
        notes.append(f"R overflows the double range from t = {R.overflow_time:.6g}; bound reported as inf")
    literal = {
        "d6": d6_lit,
        "d6_advective_omega2_form": inp.b * inp.h_m * inp.d5 * (inp.b * inp.h_m) / (2.0 * geo.lambda1)
        * np.ones_like(d6),
        "C_sq": cb.literal_C_sq,
        "int_grad_C_sq": cb.literal_int_grad_C_sq,
        "int_C_sq": cb.literal_int_C_sq,
        "d9": d9_lit,
        "d10": d10_lit,
        "M": np.full_like(d6, M_lit),
    }
    fixed = FixedChoices.from_model(a, b, L1, K1, inp.h_m, L1, K1, inp.d1)
    return DataConstants(
        inputs=inp, free=fp, fixed=fixed, N=N, d6=d6, d6_terms=d6_terms, d8=d8, c_bounds=cb,
        d9=d9, d9_terms=d9_terms, d10=d10, M=M, M_branches=branches, alpha1=alpha1, alpha2=alpha2,
        R=R.values, R_overflow_time=R.overflow_time, R_literal=R_lit.values,
        R_literal_overflow_time=R_lit.overflow_time, N2=N2, C2_sq_sup=C2_sup,
        literal=literal, notes=notes,
    )


def compute_ledger(sc: Scenario, fp: FreeParameters = FreeParameters(),
                   geometry: GeometryConstants | None = None, n_samples: int = 1000,
                   coeffs2: tuple[float, float] | None = None) -> DataConstants:
    return evaluate_ledger(prepare_inputs(sc, geometry, n_samples, coeffs2), fp)


# -- tuning -----------------------------------------------------------------------

@dataclass(frozen=True)
class TuneResult:
    params: FreeParameters
    objective_default: float
    objective: float
    evaluations: int
    diagnostic: str = ""


def tune_free_parameters(inp: LedgerInputs, start: FreeParameters = FreeParameters(),
                         active: Iterable[str] | None = None, max_evals: int = 500,
                         objective: Callable[[DataConstants], float] | None = None,
                         box: tuple[float, float] = (1e-12, 1e12)) -> TuneResult:
    """Coordinate descent over the logarithms of the free parameters.

    Each coordinate is tried at ``x * s`` and ``x / s``; a success is
    repeated in the same direction, and the factor ``s`` (initially 2) is
    replaced by its square root after a sweep without progress.  Values are
    kept inside ``box``: parameters the objective does not depend on would
    otherwise drift without limit.  The returned objective never exceeds
    the starting one.
    """
    names = list(active) if active is not None else list(FreeParameters.names())
    for n in names:
        if n not in FreeParameters.names():
            raise ValueError(f"unknown free parameter {n!r}")
    obj = objective or (lambda dc: dc.objective())
    evals = 0

    def f(p):
        nonlocal evals
        evals += 1
        try:
            val = obj(evaluate_ledger(inp, p))
        except (FloatingPointError, OverflowError, ValueError):
            return math.inf
        return val if not math.isnan(val) else math.inf

    best_p = start
    best = f(start)
    f0 = best
    if best == 0.0:
        return TuneResult(start, f0, best, evals, "objective is zero at the start point")
    s = 2.0
    while evals < max_evals and s > 1.0 + 1e-3:
        improved = False
        for n in names:
            for direction in (s, 1.0 / s):
                moved = False
                while evals < max_evals:
                    new = getattr(best_p, n) * direction
                    if not box[0] <= new <= box[1]:
                        break
                    cand = replace(best_p, **{n: new})
                    val = f(cand)
                    if val < best:
                        best, best_p, moved, improved = val, cand, True, True
                    else:
                        break
                if moved:
                    break
        if not improved:
            s = math.sqrt(s)
    diag = ""
    if not math.isfinite(best):
        diag = "objective infinite at every probed point; returning the start point"
        best_p, best = start, f0
    return TuneResult(best_p, f0, best, evals, diag)
