"""
Continuous-dependence experiments and the verification battery.

A twin run integrates the same data with two reaction pairs ``(L1, K1)``
and ``(L2, K2)`` in one lockstep batch, so the differences
``w = v1 - v2``, ``theta = T1 - T2``, ``phi = C1 - C2`` are formed by
pointwise subtraction at identical times.  The measured energy

    F(t) = ||w||^2 + ||theta||^2 + ||phi||^2

is compared with the data-only bound ``R(t) (alpha1 l^2 + alpha2 k^2)``
built from pair 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from . import report
from .bounds import DataConstants, FreeParameters, LedgerInputs, evaluate_ledger, prepare_inputs
from .convection import Integrator, SolverOptions, Trajectory, max_temp_check
from .domain import Grid2D, VectorField2D, velocity_grad_norm_sq, velocity_l2_norm_sq
from .elliptic import (GeometryConstants, SOBOLEV_CONSTANT, check_lemma1, check_lemma2,
                       geometry_constants, harmonic_family, rellich_constants, torsion_function)
from .errors import BlowUpError, ConfigError
from .scenario import Scenario, load_json, scenario_from_dict

__all__ = [
    "Tolerance",
    "TwinSpec",
    "TwinReport",
    "ScalingResult",
    "SobolevReport",
    "Check",
    "VerificationReport",
    "twin_run",
    "twin_batch",
    "scaling_study",
    "scaling_studies",
    "sobolev_check",
    "sobolev_ratio",
    "verify_all",
    "suite_configs",
    "suite_scenarios",
    "load_twinspec",
]


@dataclass(frozen=True)
class Tolerance:
    """Relative margin and absolute floor applied to every inequality check."""

    rel: float = 0.02
    abs: float = 1e-12

    def holds(self, lhs, rhs):
        return np.asarray(lhs) <= np.asarray(rhs) * (1.0 + self.rel) + self.abs


DEFAULT_TOL = Tolerance()


# -- twin runs ------------------------------------------------------------------

@dataclass(frozen=True)
class TwinSpec:
    base: Scenario
    coeffs1: tuple[float, float]
    coeffs2: tuple[float, float]

    def __post_init__(self):
        for label, pair in (("coeffs1", self.coeffs1), ("coeffs2", self.coeffs2)):
            if len(pair) != 2 or not all(np.isfinite(c) and c > 0 for c in pair):
                raise ValueError(f"{label} must be two positive numbers (L, K), got {pair}")
        object.__setattr__(self, "coeffs1", tuple(float(c) for c in self.coeffs1))
        object.__setattr__(self, "coeffs2", tuple(float(c) for c in self.coeffs2))

    @property
    def l(self) -> float:
        return self.coeffs1[0] - self.coeffs2[0]

    @property
    def k(self) -> float:
        return self.coeffs1[1] - self.coeffs2[1]

    def scenarios(self) -> tuple[Scenario, Scenario]:
        b = self.base
        return (b.with_coefficients(*self.coeffs1, name=f"{b.name}[1]"),
                b.with_coefficients(*self.coeffs2, name=f"{b.name}[2]"))

    def swapped(self) -> "TwinSpec":
        return TwinSpec(self.base, self.coeffs2, self.coeffs1)

    def perturbed(self, l: float, k: float) -> "TwinSpec":
        L1, K1 = self.coeffs1
        return TwinSpec(self.base, self.coeffs1, (L1 - l, K1 - k))

    def warnings(self) -> list[str]:
        L1, K1 = self.coeffs1
        out = []
        if abs(self.l) > 0.5 * L1:
            out.append(f"|l| = {abs(self.l):g} exceeds half of L1 = {L1:g}")
        if abs(self.k) > 0.5 * K1:
            out.append(f"|k| = {abs(self.k):g} exceeds half of K1 = {K1:g}")
        return out


def _pair(d, where: str) -> tuple[float, float]:
    if not isinstance(d, dict) or set(d) != {"L", "K"}:
        raise ConfigError('expected an object {"L": .., "K": ..}', where)
    try:
        return float(d["L"]), float(d["K"])
    except (TypeError, ValueError):
        raise ConfigError("L and K must be numbers", where) from None


def twinspec_from_dict(cfg: dict, name: str | None = None) -> TwinSpec:
    if not isinstance(cfg, dict):
        raise ConfigError("twin configuration must be a JSON object")
    for key in ("coeffs1", "coeffs2"):
        if key not in cfg:
            raise ConfigError(f"missing required field {key!r}", key)
    c1 = _pair(cfg["coeffs1"], "coeffs1")
    c2 = _pair(cfg["coeffs2"], "coeffs2")
    scfg = {k: v for k, v in cfg.items() if k not in ("coeffs1", "coeffs2")}
    params = dict(scfg.get("params", {}))
    params.setdefault("L", c1[0])
    params.setdefault("K", c1[1])
    scfg["params"] = params
    base = scenario_from_dict(scfg, name=name)
    try:
        return TwinSpec(base, c1, c2)
    except ValueError as exc:
        raise ConfigError(str(exc), "coeffs") from None


def load_twinspec(path: str | Path) -> TwinSpec:
    return twinspec_from_dict(load_json(path), name=Path(path).stem)


@dataclass(frozen=True, eq=False)
class TwinReport:
    times: np.ndarray
    F: np.ndarray
    bound: np.ndarray
    ratio: np.ndarray
    l: float
    k: float
    passed: bool
    constants: dict = field(default_factory=dict)
    passed_literal_kernel: bool = True
    warnings: list = field(default_factory=list)
    tol: Tolerance = DEFAULT_TOL

    @property
    def max_F(self) -> float:
        return float(np.max(self.F))

    @property
    def max_ratio(self) -> float:
        return float(np.max(self.ratio))

    def write_csv(self, path) -> Path:
        return report.write_csv(path, ("t", "F", "bound", "ratio"), (self.times, self.F, self.bound, self.ratio))

    def to_dict(self) -> dict:
        return {
            "l": self.l, "k": self.k, "passed": self.passed, "max_F": self.max_F,
            "max_ratio": self.max_ratio, "F_final": float(self.F[-1]), "bound_final": float(self.bound[-1]),
            "passed_literal_kernel": self.passed_literal_kernel,
            "margin": {"rel": self.tol.rel, "abs": self.tol.abs},
            "constants": self.constants, "warnings": list(self.warnings), "n_samples": len(self.times),
        }


def _difference_energy(integ: Integrator) -> np.ndarray:
    """``F`` of every member against member 0."""
    area = integ.grid.cell_area
    du = integ.u[1:, 1:-1, :] - integ.u[:1, 1:-1, :]
    dv = integ.v[1:, :, 1:-1] - integ.v[:1, :, 1:-1]
    dT = integ.T[1:] - integ.T[:1]
    dC = integ.C[1:] - integ.C[:1]
    s = "bij,bij->b"
    return area * (np.einsum(s, du, du) + np.einsum(s, dv, dv) + np.einsum(s, dT, dT) + np.einsum(s, dC, dC))


def _ratio(F, bound):
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(bound > 0, F / bound, np.where(F > 0, np.inf, 0.0))
    return r


def _twin_report(times, F, inp: LedgerInputs, coeffs2, fp, tol, warnings) -> tuple[TwinReport, DataConstants]:
    L1, K1 = inp.L1, inp.K1
    l, k = L1 - coeffs2[0], K1 - coeffs2[1]
    dc = evaluate_ledger(replace(inp, L2=float(coeffs2[0]), K2=float(coeffs2[1])), fp)
    bound = dc.bound_at(times, l, k)
    bound_lit = np.interp(times, dc.times, dc.R_literal) * (dc.alpha1 * l**2 + dc.alpha2 * k**2)
    constants = {"alpha1": dc.alpha1, "alpha2": dc.alpha2, "M": dc.M, "Omega1": dc.geometry.omega_sob,
                 "d10_final": float(dc.d10[-1]), "R_final": float(dc.R[-1]),
                 "R_overflow_time": dc.R_overflow_time, "L1": L1, "K1": K1,
                 "L2": float(coeffs2[0]), "K2": float(coeffs2[1]), "free_parameters": fp.as_dict()}
    rep = TwinReport(
        times=times, F=F, bound=bound, ratio=_ratio(F, bound), l=l, k=k,
        passed=bool(np.all(tol.holds(F, bound))), constants=constants,
        passed_literal_kernel=bool(np.all(tol.holds(F, bound_lit))), warnings=warnings, tol=tol,
    )
    return rep, dc


def twin_batch(base: Scenario, coeffs1: tuple[float, float], coeffs2_list: Sequence[tuple[float, float]],
               fp: FreeParameters = FreeParameters(), geometry: GeometryConstants | None = None,
               n_samples: int = 1000, options: SolverOptions = SolverOptions(),
               tol: Tolerance = DEFAULT_TOL) -> tuple[list[TwinReport], Trajectory]:
    """Run the pair-1 solution alongside every pair in ``coeffs2_list``.

    All members share one sequence of time steps.  Returns one report per
    pair-2 member and the pair-1 trajectory.
    """
    specs = [TwinSpec(base, coeffs1, c2) for c2 in coeffs2_list]
    members = [base.with_coefficients(*coeffs1, name=f"{base.name}[1]")]
    members += [s.scenarios()[1] for s in specs]
    integ = Integrator(members, options)
    times, Fs = [], []

    def on_step(it):
        times.append(it.t)
        Fs.append(_difference_energy(it))

    integ.run(base.t_final, on_step)
    traj = integ.trajectories()[0]
    times = np.asarray(times)
    F = np.asarray(Fs)
    inp = prepare_inputs(members[0], geometry, n_samples)
    reports = []
    for j, (spec, c2) in enumerate(zip(specs, coeffs2_list)):
        rep, _ = _twin_report(times, F[:, j], inp, c2, fp, tol, spec.warnings())
        reports.append(rep)
    return reports, traj


def twin_run(spec: TwinSpec, fp: FreeParameters = FreeParameters(), **kw) -> TwinReport:
    """Integrate both members of ``spec`` in lockstep and compare ``F`` with the bound."""
    reports, _ = twin_batch(spec.base, spec.coeffs1, [spec.coeffs2], fp, **kw)
    return reports[0]


@dataclass(frozen=True, eq=False)
class ScalingResult:
    direction: tuple[float, float]
    factors: np.ndarray
    max_F: np.ndarray
    slope: float
    intercept: float
    residual: float
    inconclusive: bool
    reports: list = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {"direction": list(self.direction), "factors": self.factors, "max_F": self.max_F,
                "slope": self.slope, "intercept": self.intercept, "residual": self.residual,
                "inconclusive": self.inconclusive,
                "theorem_passed": [r.passed for r in self.reports]}


F_FLOOR = 1e-14


def _direction(spec: TwinSpec) -> tuple[float, float]:
    l, k = spec.l, spec.k
    s = max(abs(l), abs(k))
    if s == 0:
        raise ValueError("scaling study needs a nonzero perturbation direction (coeffs1 != coeffs2)")
    return l / s, k / s


def scaling_studies(base: TwinSpec, factors: Sequence[float],
                    directions: Sequence[tuple[float, float]] | None = None,
                    **kw) -> list[ScalingResult]:
    """Least-squares slope of ``log max_t F`` against ``log factor`` per direction.

    The perturbation for direction ``d`` and factor ``s`` is
    ``(l, k) = s d``.  ``base`` supplies the data, the reference pair and,
    when ``directions`` is omitted, the direction (its ``(l, k)``
    normalised by the larger component).  All runs share one batch.
    """
    factors = np.asarray([float(f) for f in factors])
    if len(factors) < 3 or np.any(factors <= 0):
        raise ValueError("scaling study needs at least 3 positive factors")
    dirs = list(directions) if directions is not None else [_direction(base)]
    L1, K1 = base.coeffs1
    pairs = [(L1 - s * d[0], K1 - s * d[1]) for d in dirs for s in factors]
    reports, _ = twin_batch(base.base, base.coeffs1, pairs, **kw)
    out = []
    for i, d in enumerate(dirs):
        reps = reports[i * len(factors):(i + 1) * len(factors)]
        mF = np.array([r.max_F for r in reps])
        inconclusive = bool(np.any(mF < F_FLOOR))
        if inconclusive:
            slope = intercept = residual = math.nan
        else:
            x, y = np.log(factors), np.log(mF)
            (slope, intercept), res, *_ = np.polyfit(x, y, 1, full=True)
            residual = float(np.sqrt(res[0] / len(x))) if len(res) else 0.0
        out.append(ScalingResult(tuple(d), factors, mF, float(slope), float(intercept),
                                 float(residual), inconclusive, reps))
    return out


def scaling_study(base: TwinSpec, factors: Sequence[float], **kw) -> ScalingResult:
    return scaling_studies(base, factors, None, **kw)[0]


# -- Sobolev inequality ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SobolevReport:
    n_samples: int
    ratios: np.ndarray
    worst_ratio: float
    passed: bool
    omega1: float
    seed: int
    tol: Tolerance = DEFAULT_TOL

    def to_dict(self) -> dict:
        return {"n_samples": self.n_samples, "worst_ratio": self.worst_ratio, "passed": self.passed,
                "omega1": self.omega1, "seed": self.seed, "margin": self.tol.rel, "ratios": self.ratios}


def sobolev_ratio(w4: float, w2: float, gw2: float, omega1: float = SOBOLEV_CONSTANT) -> float:
    """``int |w|^4 / (Omega1 int |w|^2 int |grad w|^2)`` with ``0/0 = 0``."""
    rhs = omega1 * w2 * gw2
    if rhs == 0:
        return 0.0 if w4 == 0 else math.inf
    return w4 / rhs


def _random_sine_field(grid: Grid2D, rng: np.random.Generator, max_modes: int, max_index: int):
    """Component values and gradients of a random sum of sine modes at cell centres."""
    x, y = grid.xc, grid.yc
    comps = []
    for _ in range(2):
        n_modes = int(rng.integers(1, max_modes + 1))
        m = rng.integers(1, max_index + 1, n_modes)
        n = rng.integers(1, max_index + 1, n_modes)
        amp = rng.standard_normal(n_modes) / (m**2 + n**2)
        kx, ky = m * np.pi / grid.lx, n * np.pi / grid.ly
        sx, cx = np.sin(np.outer(kx, x)), np.cos(np.outer(kx, x))
        sy, cy = np.sin(np.outer(ky, y)), np.cos(np.outer(ky, y))
        val = np.einsum("k,ki,kj->ij", amp, sx, sy)
        dx = np.einsum("k,ki,kj->ij", amp * kx, cx, sy)
        dy = np.einsum("k,ki,kj->ij", amp * ky, sx, cy)
        comps.append((val, dx, dy))
    return comps


def sobolev_check(grid: Grid2D, n_samples: int = 100, seed: int = 0, max_modes: int = 8,
                  max_index: int = 6, omega1: float = SOBOLEV_CONSTANT,
                  tol: Tolerance = DEFAULT_TOL) -> SobolevReport:
    """Check ``int |w|^4 <= Omega1 int |w|^2 int |grad w|^2`` on random fields.

    Each component is a sum of at most ``max_modes`` sine modes with indices
    up to ``max_index``, so both vanish on the boundary.  Integrals use the
    midpoint rule with exact derivatives.
    """
    rng = np.random.default_rng(seed)
    dA = grid.cell_area
    ratios = np.empty(n_samples)
    for i in range(n_samples):
        (u, ux, uy), (v, vx, vy) = _random_sine_field(grid, rng, max_modes, max_index)
        mag2 = u**2 + v**2
        ratios[i] = sobolev_ratio(float(np.sum(mag2**2) * dA), float(np.sum(mag2) * dA),
                                  float(np.sum(ux**2 + uy**2 + vx**2 + vy**2) * dA), omega1)
    worst = float(np.max(ratios)) if n_samples else 0.0
    return SobolevReport(n_samples, ratios, worst, bool(worst <= 1.0 + tol.rel), omega1, seed, tol)


def _velocity_sobolev(w: VectorField2D) -> tuple[float, float, float]:
    uc = 0.5 * (w.u[1:, :] + w.u[:-1, :])
    vc = 0.5 * (w.v[:, 1:] + w.v[:, :-1])
    w4 = float(np.sum((uc**2 + vc**2) ** 2) * w.grid.cell_area)
    return w4, velocity_l2_norm_sq(w), velocity_grad_norm_sq(w)


# -- verification battery -------------------------------------------------------------

@dataclass
class Check:
    name: str
    lhs: float
    rhs: float
    margin: float
    passed: bool
    constants: dict = field(default_factory=dict)
    t_worst: float | None = None
    error: str | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        if self.error:
            return f"{status} {self.name}: error: {self.error}"
        return f"{status} {self.name}: lhs={self.lhs:.6g} rhs={self.rhs:.6g}"


@dataclass
class VerificationReport:
    scenario: str
    checks: list
    free_parameters: dict

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"scenario": self.scenario, "passed": self.passed,
                "free_parameters": self.free_parameters, "checks": self.checks}


def curve_check(name: str, t: np.ndarray, lhs: np.ndarray, t_bound: np.ndarray, bound: np.ndarray,
                tol: Tolerance = DEFAULT_TOL, constants: dict | None = None) -> Check:
    """Check ``lhs(t) <= bound(t)`` at every sample of ``t``.

    ``bound`` is interpolated linearly from its own time grid.  The
    reported pair is the sample closest to violating the check.
    """
    t = np.asarray(t, dtype=float)
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.interp(t, t_bound, bound)
    ok = tol.holds(lhs, rhs)
    with np.errstate(invalid="ignore", divide="ignore"):
        use = lhs / (rhs * (1.0 + tol.rel) + tol.abs)
    use = np.where(np.isnan(use), np.inf, use)
    i = int(np.argmax(use))
    return Check(name, float(lhs[i]), float(rhs[i]), tol.rel, bool(np.all(ok)),
                 constants or {}, float(t[i]))


def ledger_checks(traj: Trajectory, dc: DataConstants, tol: Tolerance = DEFAULT_TOL,
                  prefix: str = "") -> list[Check]:
    """Domination of the recorded norms by the a priori curves."""
    t, tb = traj.t, dc.times
    cb = dc.c_bounds
    geo = dc.geometry
    sc = {"N": dc.N, "branch": cb.branch, "a": dc.inputs.a}
    inp = dc.inputs
    energy_rhs = inp.d5 + 2.0 / geo.lambda1 * traj.int_C_sq
    checks = [
        curve_check(prefix + "energy_velocity", t, traj.norm_v_sq + traj.int_grad_v_sq, t, energy_rhs, tol,
                    {"d5": inp.d5, "lambda1": geo.lambda1}),
        curve_check(prefix + "bound_C_sq", t, traj.norm_C_sq, tb, cb.C_sq, tol, sc),
        curve_check(prefix + "bound_int_grad_C_sq", t, traj.int_grad_C_sq, tb, cb.int_grad_C_sq, tol, sc),
        curve_check(prefix + "bound_int_C_sq", t, traj.int_C_sq, tb, cb.int_C_sq, tol, sc),
        curve_check(prefix + "bound_C_4", t, traj.norm_C_4, tb, dc.d9, tol, {"sup_d9": float(np.max(dc.d9))}),
        curve_check(prefix + "bound_velocity_d10", t, traj.norm_v_sq + traj.int_grad_v_sq, tb, dc.d10, tol,
                    {"d5": inp.d5, "lambda1": geo.lambda1}),
    ]
    return checks


def _error_check(name: str, exc: BaseException) -> Check:
    return Check(name, math.nan, math.nan, 0.0, False, {}, None, f"{type(exc).__name__}: {exc}")


def verify_all(sc: Scenario, fp: FreeParameters = FreeParameters(), trajectory: Trajectory | None = None,
               *, geometry: GeometryConstants | None = None, n_samples: int = 1000,
               theorem: tuple[float, float] | None | str = "auto", sobolev_samples: int = 20,
               seed: int = 0, tol: Tolerance = DEFAULT_TOL,
               options: SolverOptions = SolverOptions()) -> VerificationReport:
    """Run every check for ``sc``; failures of individual steps become failed checks.

    ``theorem`` is the perturbation ``(l, k)`` of the twin run;
    ``"auto"`` uses ``l = k = 0.1 min(L, K)`` and ``None`` skips it.  When a
    twin run is needed it also supplies the trajectory.
    """
    grid = sc.grid
    checks: list[Check] = []
    L, K = sc.params.L, sc.params.K
    if theorem == "auto":
        theorem = (0.1 * min(L, K), 0.1 * min(L, K))

    try:
        geo = geometry or geometry_constants(grid)
    except Exception as exc:  # geometry failure makes every ledger check meaningless
        return VerificationReport(sc.name, [_error_check("geometry", exc)], fp.as_dict())

    dc = None
    try:
        inp = prepare_inputs(sc, geo, n_samples)
        dc = evaluate_ledger(inp, fp)
    except Exception as exc:
        checks.append(_error_check("ledger", exc))

    twin = None
    try:
        if theorem is not None:
            l, k = theorem
            reports, traj = twin_batch(sc, (L, K), [(L - l, K - k)], fp, geo, n_samples, options, tol)
            twin = reports[0]
            trajectory = trajectory or traj
        elif trajectory is None:
            from .convection import simulate
            trajectory = simulate(sc, options)
    except BlowUpError as exc:
        checks.append(_error_check("simulation", exc))

    if trajectory is not None and dc is not None:
        mp = max_temp_check(trajectory, dc.inputs.T_m)
        checks.append(Check("max_principle", mp.sup_T, mp.T_m, mp.tol, mp.passed, {"T_m": mp.T_m}))
        checks.extend(ledger_checks(trajectory, dc, tol))

    try:
        rc = rellich_constants(grid)
        worst = None
        for label, bv in harmonic_family(grid):
            c = check_lemma1(bv, rc)
            if worst is None or c.lhs * worst[1].rhs > worst[1].lhs * c.rhs:
                worst = (label, c)
            if not c.passed:
                break
        label, c = worst
        checks.append(Check("lemma1", c.lhs, c.rhs, 1e-6, c.passed, {"c1": rc.c1, "c2": rc.c2, "worst": label}))
    except Exception as exc:
        checks.append(_error_check("lemma1", exc))

    try:
        tor = torsion_function(grid)
        results = [(label, check_lemma2(bv, tor)) for label, bv in harmonic_family(grid)]
        t_now = sc.h_trace(sc.t_final)
        results.append(("h(T)", check_lemma2(t_now, tor)))
        label, c = max(results, key=lambda r: r[1].lhs / r[1].rhs if r[1].rhs > 0 else 0.0)
        checks.append(Check("lemma2", c.lhs, c.rhs, 0.02, all(r[1].passed for r in results),
                            {"psi1": geo.psi1, "worst": label}))
    except Exception as exc:
        checks.append(_error_check("lemma2", exc))

    try:
        rep = sobolev_check(grid, sobolev_samples, seed, tol=tol)
        ratios = [rep.worst_ratio]
        if trajectory is not None and trajectory.final_state is not None:
            w4, w2, gw2 = _velocity_sobolev(trajectory.final_state.v)
            ratios.append(sobolev_ratio(w4, w2, gw2))
        worst = max(ratios)
        checks.append(Check("sobolev", worst, 1.0, tol.rel, worst <= 1.0 + tol.rel,
                            {"Omega1": SOBOLEV_CONSTANT, "n_random": sobolev_samples, "seed": seed}))
    except Exception as exc:
        checks.append(_error_check("sobolev", exc))

    if twin is not None:
        i = int(np.argmax(twin.ratio))
        checks.append(Check("theorem", float(twin.F[i]), float(twin.bound[i]), tol.rel, twin.passed,
                            dict(twin.constants, l=twin.l, k=twin.k), float(twin.times[i])))
    return VerificationReport(sc.name, checks, fp.as_dict())


# -- the verification suite -----------------------------------------------------------

def suite_configs() -> dict[str, dict]:
    """Scenario configurations of the five suite cases (grid and final time omitted)."""
    return {
        "zero": {"params": {"L": 1.0, "K": 1.0}},
        "constant-T": {"params": {"L": 1.0, "K": 1.0, "grav_T": [0.0, 0.0]},
                       "initial": {"T0": "constant:0.5"}, "boundary": {"g": "constant:0.5"}},
        "convective": {"params": {"L": 1.0, "K": 1.0}, "initial": {"T0": "sine-mode:1,1"}},
        "reactive": {"params": {"L": 2.0, "K": 1.0, "f": "tanh:2"},
                     "initial": {"T0": "sine-mode:1,1", "C0": "constant:1"},
                     "boundary": {"h": "constant:1"}},
        "adversarial": {"params": {"L": 1.0, "K": 1.0, "f": "quadratic:0,0.5,0.5"},
                        "boundary": {"g": "ramp:0,0.5,2", "h": "ramp:0,0.5,3"}},
    }


def suite_scenarios(n: int = 64, t_final: float = 1.0) -> dict[str, Scenario]:
    return {name: scenario_from_dict(dict(cfg, grid={"nx": n, "ny": n}, t_final=t_final), name=name)
            for name, cfg in suite_configs().items()}
