"""
Fractional-step solver for the reacting thermosolutal Boussinesq system.

One step of size ``dt`` performs

1. momentum: explicit upwind advection and buoyancy ``g T - h C``,
   Crank-Nicolson viscous diffusion with no-slip walls;
2. projection onto discretely divergence-free MAC fields (pressure mean 0);
3. temperature: explicit upwind advection, Crank-Nicolson diffusion with
   Dirichlet data ``g``;
4. concentration: advection scaled by ``b/a``, Crank-Nicolson diffusion
   scaled by ``1/a``, Crank-Nicolson decay ``-K C / a`` and the source
   ``L f(T) / a`` evaluated at the old temperature; Dirichlet data ``h``.

Stages 3 and 4 share one batched transform solve because the source only
needs the temperature at the start of the step.

The scalar advection uses face velocities in advective form, so each
scalar update is a convex combination of neighbouring values whenever the
step satisfies the limits in :func:`max_stable_dt`.  Together with the
time-step restriction on the Crank-Nicolson stage this gives a discrete
maximum principle for the temperature.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from ._fastsolve import get_solver
from .domain import ScalarField, VectorField2D
from .errors import BlowUpError, StepRejected
from .scenario import Scenario

__all__ = [
    "SolverOptions",
    "SolutionState",
    "Trajectory",
    "Integrator",
    "initial_state",
    "max_stable_dt",
    "step",
    "simulate",
    "run_lockstep",
    "max_temp_check",
    "TRAJECTORY_COLUMNS",
]

TRAJECTORY_COLUMNS = ("t", "norm_v_sq", "int_grad_v_sq", "sup_T", "norm_C_sq",
                      "norm_C_4", "int_grad_C_sq", "int_C_sq")

DIFFUSIVE_FACTOR = 0.25
ADVECTIVE_FACTOR = 0.5


@dataclass(frozen=True)
class SolverOptions:
    """Knobs that change the discrete model.

    ``freeze_velocity`` keeps ``v`` equal to its initial value (the momentum
    stage is skipped); ``advect_scalars=False`` drops the transport terms
    from the T and C equations.
    """

    freeze_velocity: bool = False
    advect_scalars: bool = True
    max_steps: int = 10_000_000


@dataclass(frozen=True, eq=False)
class SolutionState:
    t: float
    v: VectorField2D
    p: ScalarField
    T: ScalarField
    C: ScalarField


def initial_state(sc: Scenario) -> SolutionState:
    return SolutionState(0.0, sc.v0, ScalarField.zeros(sc.grid), sc.T0_field(), sc.C0_field())


def _max_dt(grid, a, b, speed):
    """Diffusive and advective step limits; array arguments broadcast."""
    h = min(grid.dx, grid.dy)
    a = np.asarray(a, dtype=float)
    dt = DIFFUSIVE_FACTOR * h * h / np.maximum(1.0, 1.0 / a)
    eff = np.asarray(speed, dtype=float) * np.maximum(1.0, np.asarray(b, dtype=float) / a)
    with np.errstate(divide="ignore"):
        adv = np.where(eff > 0, ADVECTIVE_FACTOR * h / np.where(eff > 0, eff, 1.0), np.inf)
    return np.minimum(dt, adv)


def max_stable_dt(state: SolutionState, sc: Scenario) -> float:
    """Largest admissible step for ``state``: diffusive and advective limits."""
    return float(_max_dt(sc.grid, sc.params.a, sc.params.b, state.v.max_speed()))


# -- discrete operators; arrays carry a leading scenario axis -------------

def _pad_dirichlet(q, ghost_sides):
    """Cell arrays (any leading axes) with one ghost layer.

    ``ghost_sides`` = (bottom, right, top, left) holds, per boundary face,
    the ghost value plus the adjacent cell value (``2 g`` for data ``g``).
    """
    bottom, right, top, left = ghost_sides
    p = np.empty(q.shape[:-2] + (q.shape[-2] + 2, q.shape[-1] + 2))
    p[..., 1:-1, 1:-1] = q
    np.subtract(left, q[..., 0, :], out=p[..., 0, 1:-1])
    np.subtract(right, q[..., -1, :], out=p[..., -1, 1:-1])
    np.subtract(bottom, q[..., :, 0], out=p[..., 1:-1, 0])
    np.subtract(top, q[..., :, -1], out=p[..., 1:-1, -1])
    return p


def _lap_padded(p, dx, dy):
    c2 = 2.0 * p[..., 1:-1, 1:-1]
    out = p[..., 2:, 1:-1] + p[..., :-2, 1:-1]
    out -= c2
    out *= 1.0 / dx**2
    ly = p[..., 1:-1, 2:] + p[..., 1:-1, :-2]
    ly -= c2
    ly *= 1.0 / dy**2
    out += ly
    return out


class _FaceSplit:
    """Positive and negative parts of the interior face velocities."""

    def __init__(self, u, v, dx, dy):
        ui = u[..., 1:-1, :]
        vi = v[..., :, 1:-1]
        self.up = np.maximum(ui, 0.0) / dx
        self.um = np.minimum(ui, 0.0) / dx
        self.vp = np.maximum(vi, 0.0) / dy
        self.vm = np.minimum(vi, 0.0) / dy

    def increment(self, q):
        """Advective-form upwind value of ``-(v . grad q)``.

        Cell i receives ``-u_{i+1/2}^- (q_{i+1} - q_i) - u_{i-1/2}^+ (q_i - q_{i-1})``
        and likewise in y.  Wall faces carry no velocity, so no ghost value
        is ever used.  Leading axes of ``q`` broadcast against the faces.
        """
        dqx = q[..., 1:, :] - q[..., :-1, :]
        dqy = q[..., :, 1:] - q[..., :, :-1]
        out = np.zeros(np.broadcast_shapes(q.shape, self.up.shape[:-2] + q.shape[-2:]))
        out[..., :-1, :] -= self.um * dqx
        out[..., 1:, :] -= self.up * dqx
        out[..., :, :-1] -= self.vm * dqy
        out[..., :, 1:] -= self.vp * dqy
        return out


def _u_terms(u, v, dx, dy):
    """Viscous Laplacian and upwind advection at the interior u-faces.

    The v-face terms are the same computation on the transposed fields.
    """
    ui = u[..., 1:-1, :]
    # along x the neighbours of a u-face are faces (walls hold 0); along y
    # the no-slip ghost is the reflection -u
    bx = ui - u[..., :-2, :]
    fx = u[..., 2:, :] - ui
    by = np.empty_like(ui)
    by[..., 1:] = ui[..., 1:] - ui[..., :-1]
    by[..., 0] = 2.0 * ui[..., 0]
    fy = np.empty_like(ui)
    fy[..., :-1] = by[..., 1:]
    fy[..., -1] = -2.0 * ui[..., -1]
    lap = (fx - bx) * (1.0 / dx**2)
    lap += (fy - by) * (1.0 / dy**2)
    vbar = v[..., :-1, :-1] + v[..., 1:, :-1]
    vbar += v[..., :-1, 1:]
    vbar += v[..., 1:, 1:]
    vbar *= 0.25
    adv = ui * np.where(ui > 0, bx, fx) * (1.0 / dx)
    adv += vbar * np.where(vbar > 0, by, fy) * (1.0 / dy)
    return lap, adv


def _swap(a):
    return np.swapaxes(a, -1, -2)


def _sq(a):
    """Batched sum of squares over the two grid axes."""
    return np.einsum("...ij,...ij->...", a, a)


def _velocity_energy(u, v, dx, dy):
    """Discrete ``||grad v||^2`` per batch member (no-slip walls)."""
    ui = u[:, 1:-1, :]
    vi = v[:, :, 1:-1]
    e = _sq(u[:, 1:, :] - u[:, :-1, :]) * (dy / dx)
    e += _sq(ui[:, :, 1:] - ui[:, :, :-1]) * (dx / dy)
    e += (2.0 * dx / dy) * (_sq(ui[:, :, :1]) + _sq(ui[:, :, -1:]))
    e += _sq(v[:, :, 1:] - v[:, :, :-1]) * (dx / dy)
    e += _sq(vi[:, 1:, :] - vi[:, :-1, :]) * (dy / dx)
    e += (2.0 * dy / dx) * (_sq(vi[:, :1, :]) + _sq(vi[:, -1:, :]))
    return e


def _scalar_energy(q, sides, dx, dy):
    """Discrete ``||grad q||^2`` per batch member with Dirichlet data ``sides``."""
    bottom, right, top, left = sides
    e = _sq(q[:, 1:, :] - q[:, :-1, :]) * (dy / dx)
    e += _sq(q[:, :, 1:] - q[:, :, :-1]) * (dx / dy)
    e += (2.0 * dy / dx) * (_sq(q[:, :1, :] - left[:, None, :]) + _sq(q[:, -1:, :] - right[:, None, :]))
    e += (2.0 * dx / dy) * (_sq(q[:, :, :1] - bottom[:, :, None]) + _sq(q[:, :, -1:] - top[:, :, None]))
    return e


@dataclass(frozen=True)
class Trajectory:
    """Norm history recorded at every accepted step (row 0 is ``t = 0``)."""

    t: np.ndarray
    norm_v_sq: np.ndarray
    int_grad_v_sq: np.ndarray
    sup_T: np.ndarray
    norm_C_sq: np.ndarray
    norm_C_4: np.ndarray
    int_grad_C_sq: np.ndarray
    int_C_sq: np.ndarray
    grad_v_sq: np.ndarray
    grad_C_sq: np.ndarray
    final_state: SolutionState | None = field(default=None, repr=False)
    scenario_name: str = ""

    def __len__(self):
        return len(self.t)

    def column(self, name: str) -> np.ndarray:
        return getattr(self, name)

    def rows(self):
        cols = [self.column(c) for c in TRAJECTORY_COLUMNS]
        return zip(*cols)

    def write_csv(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(TRAJECTORY_COLUMNS)
            for row in self.rows():
                w.writerow([f"{x:.17g}" for x in row])
        return path


class Integrator:
    """Time integrator for one or more scenarios sharing a grid.

    All members advance with the same step sequence (lockstep), which is
    what difference experiments need, and the array work is batched along a
    leading scenario axis.  Each member keeps its own parameters, data and
    norm history.
    """

    def __init__(self, scenarios: Sequence[Scenario], options: SolverOptions = SolverOptions(),
                 states: Sequence[SolutionState] | None = None):
        scenarios = list(scenarios)
        if not scenarios:
            raise ValueError("need at least one scenario")
        grid = scenarios[0].grid
        for sc in scenarios[1:]:
            if sc.grid != grid:
                raise ValueError("batched scenarios must share one grid")
        if states is None:
            states = [initial_state(sc) for sc in scenarios]
        if len(states) != len(scenarios):
            raise ValueError("one state per scenario is required")
        t0 = float(states[0].t)
        if any(float(st.t) != t0 for st in states):
            raise ValueError("batched states must share their time")
        self.scenarios = scenarios
        self.options = options
        self.grid = grid
        self.dx, self.dy = grid.dx, grid.dy
        self.t = t0
        self.n_steps = 0
        self.u = np.stack([np.asarray(st.v.u, dtype=float) for st in states])
        self.v = np.stack([np.asarray(st.v.v, dtype=float) for st in states])
        self.p = np.stack([np.asarray(st.p.values, dtype=float) for st in states])
        self.T = np.stack([np.asarray(st.T.values, dtype=float) for st in states])
        self.C = np.stack([np.asarray(st.C.values, dtype=float) for st in states])

        def col(values):
            return np.asarray(values, dtype=float)[:, None, None]

        prm = [sc.params for sc in scenarios]
        self._a = col([q.a for q in prm])
        self._b = col([q.b for q in prm])
        self._L = col([q.L for q in prm])
        self._K = col([q.K for q in prm])
        self._gT = [col([q.grav_T[i] for q in prm]) for i in (0, 1)]
        self._gC = [col([q.grav_C[i] for q in prm]) for i in (0, 1)]
        one = np.ones_like(self._a)
        # per-equation coefficients on the stacked (T, C) array
        self._adv_scale = np.stack([one, self._b / self._a])
        self._diff = np.stack([one, one / self._a])
        self._decay = np.stack([0.0 * one, self._K / self._a])
        g = grid
        h = (g.dx, g.dy)
        self._solve_u = get_solver(("vx_dirichlet", "cc_dirichlet"), (g.nx - 1, g.ny), h)
        # the v-faces are solved transposed, in the layout of u
        self._solve_vt = get_solver(("vx_dirichlet", "cc_dirichlet"), (g.ny - 1, g.nx), (g.dy, g.dx))
        self._square = g.nx == g.ny and g.dx == g.dy
        self._solve_s = get_solver(("cc_dirichlet", "cc_dirichlet"), g.shape, h)
        self._solve_p = get_solver(("cc_neumann", "cc_neumann"), g.shape, h)
        self._const_sides: dict = {}
        self._g_sides = self._sides("g", self.t)
        self._h_sides = self._sides("h", self.t)
        self._history = {k: [] for k in ("t", "norm_v_sq", "grad_v_sq", "sup_T", "norm_C_sq",
                                         "norm_C_4", "grad_C_sq")}
        self._record()

    @property
    def size(self) -> int:
        return len(self.scenarios)

    def _sides(self, which: str, t: float):
        profiles = [getattr(sc, which) for sc in self.scenarios]
        steady = not any(pr.time_dependent for pr in profiles)
        if steady and which in self._const_sides:
            return self._const_sides[which]
        per = [self.grid.split_trace(pr.trace(self.grid, t).values) for pr in profiles]
        sides = tuple(np.stack([s[k] for s in per]) for k in range(4))
        if steady:
            self._const_sides[which] = sides
        return sides

    def state(self, i: int = 0) -> SolutionState:
        g = self.grid
        return SolutionState(self.t, VectorField2D(g, self.u[i], self.v[i]), ScalarField(g, self.p[i]),
                             ScalarField(g, self.T[i]), ScalarField(g, self.C[i]))

    def speeds(self) -> np.ndarray:
        return np.maximum(np.max(np.abs(self.u), axis=(1, 2)), np.max(np.abs(self.v), axis=(1, 2)))

    def max_dt(self) -> float:
        """Largest step admissible for every member."""
        lim = _max_dt(self.grid, self._a[:, 0, 0], self._b[:, 0, 0], self.speeds())
        return float(np.min(lim))

    def _norms(self, u, v, T, C, h_sides):
        dA = self.grid.cell_area
        C2 = C * C
        return {
            "norm_v_sq": (_sq(u[:, 1:-1, :]) + _sq(v[:, :, 1:-1])) * dA,
            "grad_v_sq": _velocity_energy(u, v, self.dx, self.dy),
            "sup_T": np.max(np.abs(T), axis=(1, 2)),
            "norm_C_sq": np.sum(C2, axis=(1, 2)) * dA,
            "norm_C_4": _sq(C2) * dA,
            "grad_C_sq": _scalar_energy(C, h_sides, self.dx, self.dy),
        }

    def _record(self, norms=None):
        if norms is None:
            norms = self._norms(self.u, self.v, self.T, self.C, self._h_sides)
        self._history["t"].append(self.t)
        for k, val in norms.items():
            self._history[k].append(val)

    def _f(self, T):
        return np.stack([sc.params.f(T[i]) for i, sc in enumerate(self.scenarios)])

    def advance(self, dt: float):
        """Advance every member by ``dt``.

        Raises
        ------
        StepRejected
            ``dt`` exceeds the stability limit of some member.
        BlowUpError
            Some member produced non-finite values.
        """
        limit = self.max_dt()
        if not dt > 0 or dt > limit * (1 + 1e-12):
            raise StepRejected(f"dt={dt:.6e} violates the stability limit {limit:.6e}", limit)
        opt = self.options
        dx, dy = self.dx, self.dy
        u, v, T, C = self.u, self.v, self.T, self.C
        t_new = self.t + dt

        if not opt.freeze_velocity:
            gT, gC = self._gT, self._gC
            fu = 0.5 * (gT[0] * (T[:, 1:, :] + T[:, :-1, :]) - gC[0] * (C[:, 1:, :] + C[:, :-1, :]))
            fv = 0.5 * (gT[1] * (T[:, :, 1:] + T[:, :, :-1]) - gC[1] * (C[:, :, 1:] + C[:, :, :-1]))
            us = np.zeros_like(u)
            vs = np.zeros_like(v)
            if self._square:
                # v transposed has the layout of u, so both share one kernel
                S = self.size
                W = np.concatenate([u, _swap(v)])
                lap, adv = _u_terms(W, np.concatenate([v, _swap(u)]), dx, dy)
                r = W[:, 1:-1, :] + 0.5 * dt * lap + dt * (np.concatenate([fu, _swap(fv)]) - adv)
                sol = self._solve_u.solve(r, 1.0, 0.5 * dt)
                us[:, 1:-1, :] = sol[:S]
                vs[:, :, 1:-1] = _swap(sol[S:])
            else:
                lap, adv = _u_terms(u, v, dx, dy)
                us[:, 1:-1, :] = self._solve_u.solve(u[:, 1:-1, :] + 0.5 * dt * lap + dt * (fu - adv),
                                                     1.0, 0.5 * dt)
                lap, adv = _u_terms(_swap(v), _swap(u), dy, dx)
                r = _swap(v)[:, 1:-1, :] + 0.5 * dt * lap + dt * (_swap(fv) - adv)
                vs[:, :, 1:-1] = _swap(self._solve_vt.solve(r, 1.0, 0.5 * dt))
            div = (us[:, 1:, :] - us[:, :-1, :]) / dx + (vs[:, :, 1:] - vs[:, :, :-1]) / dy
            phi = self._solve_p.solve(div, 0.0, -dt)
            us[:, 1:-1, :] -= dt * (phi[:, 1:, :] - phi[:, :-1, :]) / dx
            vs[:, :, 1:-1] -= dt * (phi[:, :, 1:] - phi[:, :, :-1]) / dy
            p_new = phi
        else:
            us, vs, p_new = u, v, self.p

        # T and C advance together on a stacked (2, S, nx, ny) array; the
        # reaction source is evaluated at the known temperature T^n
        g_new = self._sides("g", t_new)
        h_new = self._sides("h", t_new)
        # ghosts 2 (q_old + q_new) - cell give Lap0 q + B(data_old) + B(data_new)
        ghost = [np.stack([2.0 * (g0 + g1), 2.0 * (h0 + h1)])
                 for g0, g1, h0, h1 in zip(self._g_sides, g_new, self._h_sides, h_new)]
        Q = np.stack([T, C])
        if opt.advect_scalars:
            Q = Q + _FaceSplit(u, v, dx, dy).increment(Q) * self._adv_scale * dt
        rhs = Q * (1.0 - 0.5 * dt * self._decay)
        rhs += (0.5 * dt) * self._diff * _lap_padded(_pad_dirichlet(Q, ghost), dx, dy)
        rhs[1] += (dt * self._L / self._a) * self._f(T)
        Qn = self._solve_s.solve(rhs, 1.0 + 0.5 * dt * self._decay, (0.5 * dt) * self._diff)
        T_new, C_new = Qn[0], Qn[1]

        # every field enters some recorded norm, so non-finite values show here
        norms = self._norms(us, vs, T_new, C_new, h_new)
        for name, keys in (("v", ("norm_v_sq", "grad_v_sq")), ("T", ("sup_T",)), ("C", ("norm_C_sq",))):
            bad = ~np.all([np.isfinite(norms[k]) for k in keys], axis=0)
            if np.any(bad):
                who = self.scenarios[int(np.argmax(bad))].name
                raise BlowUpError(f"non-finite {name} in scenario {who!r}", self.t)
        self.u, self.v, self.p, self.T, self.C = us, vs, p_new, T_new, C_new
        self.t = t_new
        self.n_steps += 1
        self._g_sides, self._h_sides = g_new, h_new
        self._record(norms)

    def run(self, t_final: float, on_step: Callable[["Integrator"], None] | None = None):
        """Step to ``t_final`` with the largest admissible steps."""
        if on_step is not None:
            on_step(self)
        while self.t < t_final * (1 - 1e-14):
            self.advance(_next_dt(t_final - self.t, self.max_dt()))
            if on_step is not None:
                on_step(self)
            if self.n_steps > self.options.max_steps:
                raise BlowUpError("maximum number of steps exceeded", self.t)

    def trajectories(self) -> list[Trajectory]:
        t = np.asarray(self._history["t"], dtype=float)
        hst = {k: np.asarray(v, dtype=float) for k, v in self._history.items() if k != "t"}

        def cumtrap(y):
            out = np.zeros_like(y)
            out[1:] = np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(t))
            return out

        out = []
        for i, sc in enumerate(self.scenarios):
            col = {k: v[:, i] for k, v in hst.items()}
            out.append(Trajectory(
                t=t.copy(),
                norm_v_sq=col["norm_v_sq"],
                int_grad_v_sq=cumtrap(col["grad_v_sq"]),
                sup_T=col["sup_T"],
                norm_C_sq=col["norm_C_sq"],
                norm_C_4=col["norm_C_4"],
                int_grad_C_sq=cumtrap(col["grad_C_sq"]),
                int_C_sq=cumtrap(col["norm_C_sq"]),
                grad_v_sq=col["grad_v_sq"],
                grad_C_sq=col["grad_C_sq"],
                final_state=self.state(i),
                scenario_name=sc.name,
            ))
        return out


def step(state: SolutionState, sc: Scenario, dt: float,
         options: SolverOptions = SolverOptions()) -> SolutionState:
    """Advance ``state`` by one step of size ``dt``.

    Raises
    ------
    StepRejected
        ``dt`` exceeds :func:`max_stable_dt`; ``suggested_dt`` holds the limit.
    BlowUpError
        The update produced non-finite values.
    """
    integ = Integrator([sc], options, [state])
    integ.advance(dt)
    return integ.state()


def _next_dt(remaining: float, dt_max: float) -> float:
    if remaining <= dt_max * (1 + 1e-12):
        return remaining
    # equal steps over the remaining interval
    return remaining / math.ceil(remaining / dt_max - 1e-9)


def run_lockstep(scenarios: Sequence[Scenario], options: SolverOptions = SolverOptions(),
                 on_step: Callable[[Integrator], None] | None = None) -> list[Trajectory]:
    """Integrate several scenarios with one shared sequence of time steps.

    The scenarios must share grid and final time.  ``on_step`` sees the
    integrator after the initial state and after every accepted step.
    """
    scenarios = list(scenarios)
    if not scenarios:
        return []
    t_final = scenarios[0].t_final
    if any(sc.t_final != t_final for sc in scenarios):
        raise ValueError("lockstep scenarios must share their final time")
    integ = Integrator(scenarios, options)
    integ.run(t_final, on_step)
    return integ.trajectories()


def simulate(sc: Scenario, options: SolverOptions = SolverOptions()) -> Trajectory:
    """Integrate ``sc`` to its final time and return the recorded norms."""
    return run_lockstep([sc], options)[0]


@dataclass(frozen=True)
class MaxTempCheck:
    passed: bool
    sup_T: float
    T_m: float
    overshoot: float
    tol: float


def max_temp_check(traj: Trajectory, T_m: float, tol: float = 1e-8) -> MaxTempCheck:
    """Compare the recorded ``sup_t ||T||_inf`` against ``T_m``."""
    sup = float(np.max(traj.sup_T))
    over = max(0.0, sup - T_m)
    return MaxTempCheck(sup <= T_m + tol, sup, float(T_m), over, tol)
