"""
Elliptic solves on the rectangle and the geometry constants built on them.

All solves use the ghost-cell Dirichlet Laplacian of :mod:`.domain`,
inverted exactly with trigonometric transforms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._fastsolve import get_solver
from .domain import (BoundaryTrace, Grid2D, ScalarField, boundary_integral,
                     grad_norm_sq, l2_norm_sq, normal_derivative,
                     tangential_derivative, _same_grid)
from .errors import ConstantsInvalidError, SolverFailure

__all__ = [
    "EllipticSolution",
    "GeometryConstants",
    "RellichConstants",
    "LemmaCheck",
    "dirichlet_laplacian",
    "solve_poisson_dirichlet",
    "harmonic_extension",
    "torsion_function",
    "psi1",
    "membrane_eigenpair",
    "membrane_eigenvalue",
    "rellich_constants",
    "harmonic_family",
    "check_lemma1",
    "check_lemma2",
    "geometry_constants",
]

SOBOLEV_CONSTANT = 0.5


@dataclass(frozen=True, eq=False)
class EllipticSolution:
    field: ScalarField
    boundary: BoundaryTrace
    residual_norm: float


@dataclass(frozen=True)
class RellichConstants:
    c1: float
    c2: float
    inflation: float = 1.0
    worst_ratio: float = 0.0


@dataclass(frozen=True)
class GeometryConstants:
    lambda1: float
    psi1: float
    c1: float
    c2: float
    omega_sob: float = SOBOLEV_CONSTANT
    rellich_inflation: float = 1.0

    def __post_init__(self):
        for name in ("lambda1", "psi1", "c1", "c2", "omega_sob"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class LemmaCheck:
    name: str
    lhs: float
    rhs: float
    passed: bool
    details: dict = field(default_factory=dict)

    @property
    def ratio(self) -> float:
        if self.rhs == 0:
            return 0.0 if self.lhs == 0 else np.inf
        return self.lhs / self.rhs


def _boundary_source(trace: BoundaryTrace) -> np.ndarray:
    g = trace.grid
    bottom, right, top, left = trace.sides()
    b = np.zeros(g.shape)
    b[0, :] += 2.0 * left / g.dx**2
    b[-1, :] += 2.0 * right / g.dx**2
    b[:, 0] += 2.0 * bottom / g.dy**2
    b[:, -1] += 2.0 * top / g.dy**2
    return b


def _lap_zero(values: np.ndarray, dx: float, dy: float) -> np.ndarray:
    p = np.pad(values, 1, mode="constant")
    p[0, :] = -p[1, :]
    p[-1, :] = -p[-2, :]
    p[:, 0] = -p[:, 1]
    p[:, -1] = -p[:, -2]
    c = p[1:-1, 1:-1]
    return ((p[2:, 1:-1] - 2 * c + p[:-2, 1:-1]) / dx**2
            + (p[1:-1, 2:] - 2 * c + p[1:-1, :-2]) / dy**2)


def dirichlet_laplacian(f: ScalarField, trace: BoundaryTrace) -> np.ndarray:
    """Five-point Laplacian of ``f`` with Dirichlet data ``trace``."""
    _same_grid(f.grid, trace.grid)
    g = f.grid
    return _lap_zero(f.values, g.dx, g.dy) + _boundary_source(trace)


def _dirichlet_solver(grid: Grid2D):
    return get_solver(("cc_dirichlet", "cc_dirichlet"), grid.shape, (grid.dx, grid.dy))


def solve_poisson_dirichlet(rhs: ScalarField, bv: BoundaryTrace, tol: float = 1e-10) -> EllipticSolution:
    """Solve ``-Lap u = rhs`` in the rectangle with ``u = bv`` on the boundary.

    Raises
    ------
    SolverFailure
        If the relative residual exceeds ``tol``.
    """
    _same_grid(rhs.grid, bv.grid)
    g = rhs.grid
    b = rhs.values + _boundary_source(bv)
    u = _dirichlet_solver(g).solve(b)
    res = _lap_zero(u, g.dx, g.dy) + b
    scale = max(np.linalg.norm(b), np.finfo(float).tiny)
    rel = float(np.linalg.norm(res) / scale) if np.any(b) else float(np.linalg.norm(res))
    if rel > tol:
        raise SolverFailure("Poisson solve did not reach tolerance", rel)
    return EllipticSolution(ScalarField(g, u), bv, rel)


def harmonic_extension(bv: BoundaryTrace) -> EllipticSolution:
    return solve_poisson_dirichlet(ScalarField.zeros(bv.grid), bv)


def torsion_function(grid: Grid2D) -> EllipticSolution:
    """Torsion function: ``Lap psi = -1`` with zero boundary values."""
    sol = solve_poisson_dirichlet(ScalarField.constant(grid, 1.0), BoundaryTrace.zeros(grid))
    if np.min(sol.field.values) <= 0:
        raise SolverFailure("torsion function is not positive", sol.residual_norm)
    return sol


def psi1(torsion: EllipticSolution) -> float:
    """Largest absolute normal derivative of the torsion function on the boundary."""
    dn = normal_derivative(torsion.field, torsion.boundary)
    return float(np.max(np.abs(dn.values)))


def membrane_eigenpair(grid: Grid2D, tol: float = 1e-8, maxiter: int = 500):
    """First Dirichlet eigenpair of ``-Lap_h`` by inverse power iteration.

    Returns ``(eigenvalue, eigenvector)`` with the eigenvector normalised
    to unit discrete L2 norm and positive in the interior.
    """
    solver = _dirichlet_solver(grid)
    dx, dy = grid.dx, grid.dy
    X, Y = grid.meshgrid()
    # positive start vector, not an eigenvector of the discrete operator
    x = 1.0 + X * (grid.lx - X) * Y * (grid.ly - Y)
    x /= np.sqrt(np.sum(x**2) * grid.cell_area)
    lam = np.nan
    rel = np.inf
    for _ in range(maxiter):
        y = solver.solve(x)
        y /= np.sqrt(np.sum(y**2) * grid.cell_area)
        Ay = -_lap_zero(y, dx, dy)
        lam = float(np.sum(y * Ay) / np.sum(y * y))
        rel = float(np.linalg.norm(Ay - lam * y) / (lam * np.linalg.norm(y)))
        x = y
        if rel <= tol:
            break
    else:
        raise SolverFailure("inverse iteration did not converge", rel)
    if np.sum(x) < 0:
        x = -x
    return lam, ScalarField(grid, x)


def membrane_eigenvalue(grid: Grid2D, tol: float = 1e-8) -> float:
    return membrane_eigenpair(grid, tol)[0]


def harmonic_family(grid: Grid2D, kmax: int = 10) -> list[tuple[str, BoundaryTrace]]:
    """Traces of ``Re (x+iy)^k`` and ``Im (x+iy)^k`` for ``k = 1..kmax``."""
    x, y = grid.boundary_xy
    z = x + 1j * y
    out = []
    for k in range(1, kmax + 1):
        zk = z**k
        out.append((f"Re z^{k}", BoundaryTrace(grid, zk.real)))
        out.append((f"Im z^{k}", BoundaryTrace(grid, zk.imag)))
    return out


def _lemma1_integrals(bv: BoundaryTrace) -> tuple[float, float, float]:
    phi = harmonic_extension(bv).field
    grad = grad_norm_sq(phi, bv)
    dn = normal_derivative(phi, bv)
    ds = tangential_derivative(bv)
    return (grad,
            boundary_integral(BoundaryTrace(bv.grid, dn.values**2)),
            boundary_integral(BoundaryTrace(bv.grid, ds.values**2)))


def _rellich_candidates(grid: Grid2D) -> tuple[float, float]:
    # Rellich identity about the centre, then Wirtinger on the closed curve:
    #   int (dPhi/dn)^2 <= kappa * int |grad_s Q|^2
    #   ||grad Phi||^2  <= (P / 2 pi) sqrt(kappa) * int |grad_s Q|^2
    rho_min = 0.5 * min(grid.lx, grid.ly)
    rho_max = 0.5 * np.hypot(grid.lx, grid.ly)
    r = rho_max / rho_min
    kappa = 2.0 * r * (1.0 + 2.0 * r)
    c1 = 1.0
    c2 = grid.perimeter / (2 * np.pi) * np.sqrt(kappa) + c1 * kappa
    return c1, c2


def check_lemma1(bv: BoundaryTrace, constants: RellichConstants, rtol: float = 1e-6) -> LemmaCheck:
    grad, dn2, ds2 = _lemma1_integrals(bv)
    lhs = grad + constants.c1 * dn2
    rhs = constants.c2 * ds2
    return LemmaCheck("lemma1", lhs, rhs, lhs <= rhs * (1 + rtol) + 1e-12,
                      {"grad_sq": grad, "normal_sq": dn2, "tangential_sq": ds2,
                       "c1": constants.c1, "c2": constants.c2})


def rellich_constants(grid: Grid2D, family=None, max_doublings: int = 30) -> RellichConstants:
    """Constants ``(c1, c2)`` for the harmonic gradient/boundary inequality.

    Candidate values come from the Rellich identity for the rectangle; they
    are checked on ``family`` (default :func:`harmonic_family`) and ``c2``
    is doubled until every member passes.
    """
    if family is None:
        family = harmonic_family(grid)
    c1, c2 = _rellich_candidates(grid)
    sides = [_lemma1_integrals(bv) for _, bv in family]
    inflation = 1.0
    for _ in range(max_doublings + 1):
        ratios = [(g + c1 * n) / (inflation * c2 * s) for g, n, s in sides if s > 0]
        worst = max(ratios, default=0.0)
        if worst <= 1.0:
            return RellichConstants(c1, inflation * c2, inflation, worst)
        inflation *= 2.0
    raise ConstantsInvalidError(f"Rellich constants failed validation (worst ratio {worst:.3g})")


def _weighted_energy(phi: np.ndarray, psi: np.ndarray, bv: BoundaryTrace) -> float:
    # (psi grad phi, grad phi) with psi averaged onto faces; psi vanishes on
    # the boundary, so the boundary half cells see psi_cell / 2
    g = bv.grid
    dx, dy = g.dx, g.dy
    bottom, right, top, left = bv.sides()
    px = 0.5 * (psi[1:, :] + psi[:-1, :])
    py = 0.5 * (psi[:, 1:] + psi[:, :-1])
    e = np.sum(px * np.diff(phi, axis=0) ** 2) * dy / dx
    e += np.sum(py * np.diff(phi, axis=1) ** 2) * dx / dy
    e += dy / dx * (np.sum(psi[0, :] * (phi[0, :] - left) ** 2) + np.sum(psi[-1, :] * (phi[-1, :] - right) ** 2))
    e += dx / dy * (np.sum(psi[:, 0] * (phi[:, 0] - bottom) ** 2) + np.sum(psi[:, -1] * (phi[:, -1] - top) ** 2))
    return float(e)


def check_lemma2(phi_boundary: BoundaryTrace, torsion: EllipticSolution,
                 margin: float = 0.02, rtol: float = 1e-6) -> LemmaCheck:
    """Check ``2 (psi grad Phi, grad Phi) + ||Phi||^2 <= psi1 * int Q^2``."""
    _same_grid(phi_boundary.grid, torsion.field.grid)
    phi = harmonic_extension(phi_boundary).field
    p1 = psi1(torsion)
    weighted = _weighted_energy(phi.values, torsion.field.values, phi_boundary)
    norm = l2_norm_sq(phi)
    lhs = 2.0 * weighted + norm
    rhs = p1 * boundary_integral(BoundaryTrace(phi_boundary.grid, phi_boundary.values**2))
    return LemmaCheck("lemma2", lhs, rhs, lhs <= rhs * (1 + rtol + margin) + 1e-12,
                      {"weighted_energy": weighted, "norm_sq": norm, "psi1": p1})


def geometry_constants(grid: Grid2D) -> GeometryConstants:
    lam = membrane_eigenvalue(grid)
    p1 = psi1(torsion_function(grid))
    rc = rellich_constants(grid)
    return GeometryConstants(lam, p1, rc.c1, rc.c2, SOBOLEV_CONSTANT, rc.inflation)
