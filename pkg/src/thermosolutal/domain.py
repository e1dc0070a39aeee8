"""
Discrete geometry on an axis-aligned rectangle.

Scalars live at cell centres ``((i + 1/2) dx, (j + 1/2) dy)`` and are
stored as ``(nx, ny)`` arrays indexed ``[i, j]``.  Velocities use the MAC
layout: ``u`` on vertical faces, shape ``(nx + 1, ny)``; ``v`` on
horizontal faces, shape ``(nx, ny + 1)``.

Boundary traces are sampled at the midpoints of the boundary faces, one
node per face, ordered counterclockwise from the corner at the origin::

    bottom  (x, 0)   left -> right     nx nodes, weight dx
    right   (lx, y)  bottom -> top     ny nodes, weight dy
    top     (x, ly)  right -> left     nx nodes, weight dx
    left    (0, y)   top -> bottom     ny nodes, weight dy

Dirichlet data enter the cell-centred stencils through ghost cells,
``f_ghost = 2 g - f_boundary_cell``, so the discrete field "equals" the
trace on each boundary face in the averaged sense.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from .errors import GridMismatchError, InvalidFieldError

__all__ = [
    "Grid2D",
    "ScalarField",
    "VectorField2D",
    "BoundaryTrace",
    "l2_norm_sq",
    "l4_norm_4",
    "grad_norm_sq",
    "boundary_integral",
    "tangential_derivative",
    "normal_derivative",
    "velocity_l2_norm_sq",
    "velocity_grad_norm_sq",
]


def _frozen(a) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class Grid2D:
    """Uniform cell-centred grid on ``[0, lx] x [0, ly]``."""

    nx: int
    ny: int
    lx: float = 1.0
    ly: float = 1.0

    def __post_init__(self):
        if int(self.nx) != self.nx or int(self.ny) != self.ny:
            raise ValueError("nx and ny must be integers")
        if self.nx < 4 or self.ny < 4:
            raise ValueError(f"grid needs at least 4 cells per side, got {self.nx}x{self.ny}")
        if not (self.lx > 0 and self.ly > 0 and np.isfinite(self.lx) and np.isfinite(self.ly)):
            raise ValueError("side lengths must be positive and finite")
        object.__setattr__(self, "nx", int(self.nx))
        object.__setattr__(self, "ny", int(self.ny))
        object.__setattr__(self, "lx", float(self.lx))
        object.__setattr__(self, "ly", float(self.ly))

    @property
    def dx(self) -> float:
        return self.lx / self.nx

    @property
    def dy(self) -> float:
        return self.ly / self.ny

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nx, self.ny)

    @property
    def measure(self) -> float:
        """Lebesgue measure of the rectangle."""
        return self.lx * self.ly

    @property
    def perimeter(self) -> float:
        return 2.0 * (self.lx + self.ly)

    @property
    def cell_area(self) -> float:
        return self.dx * self.dy

    @cached_property
    def xc(self) -> np.ndarray:
        return _frozen((np.arange(self.nx) + 0.5) * self.dx)

    @cached_property
    def yc(self) -> np.ndarray:
        return _frozen((np.arange(self.ny) + 0.5) * self.dy)

    def meshgrid(self) -> tuple[np.ndarray, np.ndarray]:
        """Cell-centre coordinates, each of shape ``(nx, ny)``."""
        return np.meshgrid(self.xc, self.yc, indexing="ij")

    # -- boundary nodes -------------------------------------------------
    @property
    def n_boundary(self) -> int:
        return 2 * (self.nx + self.ny)

    @cached_property
    def boundary_xy(self) -> tuple[np.ndarray, np.ndarray]:
        """Coordinates of the boundary nodes in counterclockwise order."""
        xc, yc = self.xc, self.yc
        x = np.concatenate([xc, np.full(self.ny, self.lx), xc[::-1], np.zeros(self.ny)])
        y = np.concatenate([np.zeros(self.nx), yc, np.full(self.nx, self.ly), yc[::-1]])
        return _frozen(x), _frozen(y)

    @cached_property
    def boundary_weights(self) -> np.ndarray:
        w = np.concatenate([
            np.full(self.nx, self.dx), np.full(self.ny, self.dy),
            np.full(self.nx, self.dx), np.full(self.ny, self.dy),
        ])
        return _frozen(w)

    @cached_property
    def boundary_arclength(self) -> np.ndarray:
        """Arclength coordinate of each node, measured from the origin."""
        nx, ny, dx, dy = self.nx, self.ny, self.dx, self.dy
        k = np.arange(nx) + 0.5
        j = np.arange(ny) + 0.5
        s = np.concatenate([
            k * dx,
            self.lx + j * dy,
            self.lx + self.ly + k * dx,
            2 * self.lx + self.ly + j * dy,
        ])
        return _frozen(s)

    @cached_property
    def boundary_normals(self) -> tuple[np.ndarray, np.ndarray]:
        nx, ny = self.nx, self.ny
        n1 = np.concatenate([np.zeros(nx), np.ones(ny), np.zeros(nx), -np.ones(ny)])
        n2 = np.concatenate([-np.ones(nx), np.zeros(ny), np.ones(nx), np.zeros(ny)])
        return _frozen(n1), _frozen(n2)

    def split_trace(self, values: np.ndarray):
        """Split trace values into ``(bottom, right, top, left)``.

        Every side is returned in increasing coordinate order (``top`` and
        ``left`` are reversed relative to the counterclockwise storage).
        """
        nx, ny = self.nx, self.ny
        values = np.asarray(values)
        bottom = values[:nx]
        right = values[nx:nx + ny]
        top = values[nx + ny:2 * nx + ny][::-1]
        left = values[2 * nx + ny:][::-1]
        return bottom, right, top, left

    def join_trace(self, bottom, right, top, left) -> np.ndarray:
        """Inverse of :meth:`split_trace`."""
        return np.concatenate([
            np.asarray(bottom, float), np.asarray(right, float),
            np.asarray(top, float)[::-1], np.asarray(left, float)[::-1],
        ])

    def refined(self, factor: int = 2) -> "Grid2D":
        return Grid2D(self.nx * factor, self.ny * factor, self.lx, self.ly)


def _check_values(values: np.ndarray, shape: tuple[int, ...], what: str) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.shape != shape:
        raise InvalidFieldError(f"{what}: expected shape {shape}, got {values.shape}")
    if not np.all(np.isfinite(values)):
        raise InvalidFieldError(f"{what}: contains non-finite values")
    return _frozen(values)


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Cell-centred scalar field."""

    grid: Grid2D
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _check_values(self.values, self.grid.shape, "ScalarField"))

    @classmethod
    def zeros(cls, grid: Grid2D) -> "ScalarField":
        return cls(grid, np.zeros(grid.shape))

    @classmethod
    def constant(cls, grid: Grid2D, c: float) -> "ScalarField":
        return cls(grid, np.full(grid.shape, float(c)))

    @classmethod
    def from_function(cls, grid: Grid2D, func: Callable) -> "ScalarField":
        X, Y = grid.meshgrid()
        return cls(grid, np.broadcast_to(func(X, Y), grid.shape))

    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))


@dataclass(frozen=True, eq=False)
class VectorField2D:
    """Velocity on the staggered MAC layout.

    ``u[i, j]`` sits at ``(i dx, (j + 1/2) dy)`` and ``v[i, j]`` at
    ``((i + 1/2) dx, j dy)``; wall faces are part of the arrays.
    """

    grid: Grid2D
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        g = self.grid
        object.__setattr__(self, "u", _check_values(self.u, (g.nx + 1, g.ny), "VectorField2D.u"))
        object.__setattr__(self, "v", _check_values(self.v, (g.nx, g.ny + 1), "VectorField2D.v"))

    @classmethod
    def zeros(cls, grid: Grid2D) -> "VectorField2D":
        return cls(grid, np.zeros((grid.nx + 1, grid.ny)), np.zeros((grid.nx, grid.ny + 1)))

    @classmethod
    def from_streamfunction(cls, grid: Grid2D, psi: Callable) -> "VectorField2D":
        """Discretely divergence-free field from a streamfunction at cell corners.

        ``u = d(psi)/dy`` and ``v = -d(psi)/dx`` by differences of corner
        values, so the discrete divergence vanishes identically.  ``psi``
        should vanish on the boundary for the wall faces to carry no flux.
        """
        xn = np.arange(grid.nx + 1) * grid.dx
        yn = np.arange(grid.ny + 1) * grid.dy
        X, Y = np.meshgrid(xn, yn, indexing="ij")
        P = np.asarray(psi(X, Y), dtype=float)
        u = (P[:, 1:] - P[:, :-1]) / grid.dy
        v = -(P[1:, :] - P[:-1, :]) / grid.dx
        u[0, :] = 0.0
        u[-1, :] = 0.0
        v[:, 0] = 0.0
        v[:, -1] = 0.0
        return cls(grid, u, v)

    def divergence(self) -> np.ndarray:
        g = self.grid
        return (self.u[1:, :] - self.u[:-1, :]) / g.dx + (self.v[:, 1:] - self.v[:, :-1]) / g.dy

    def max_speed(self) -> float:
        return float(max(np.max(np.abs(self.u)), np.max(np.abs(self.v))))

    def wall_flux(self) -> float:
        """Largest normal velocity on the walls (zero for admissible fields)."""
        return float(max(np.max(np.abs(self.u[[0, -1], :])), np.max(np.abs(self.v[:, [0, -1]]))))


@dataclass(frozen=True, eq=False)
class BoundaryTrace:
    """Values at the boundary nodes of ``grid`` (see module docstring)."""

    grid: Grid2D
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _check_values(self.values, (self.grid.n_boundary,), "BoundaryTrace"))

    @property
    def weights(self) -> np.ndarray:
        return self.grid.boundary_weights

    @classmethod
    def zeros(cls, grid: Grid2D) -> "BoundaryTrace":
        return cls(grid, np.zeros(grid.n_boundary))

    @classmethod
    def constant(cls, grid: Grid2D, c: float) -> "BoundaryTrace":
        return cls(grid, np.full(grid.n_boundary, float(c)))

    @classmethod
    def from_function(cls, grid: Grid2D, func: Callable) -> "BoundaryTrace":
        x, y = grid.boundary_xy
        return cls(grid, np.broadcast_to(func(x, y), (grid.n_boundary,)))

    def sides(self):
        return self.grid.split_trace(self.values)

    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))


def _same_grid(a: Grid2D, b: Grid2D):
    if a != b:
        raise GridMismatchError(f"grid mismatch: {a} vs {b}")


def l2_norm_sq(f: ScalarField) -> float:
    """Midpoint-rule value of the squared L2 norm."""
    return float(np.sum(f.values ** 2) * f.grid.cell_area)


def l4_norm_4(f: ScalarField) -> float:
    """Midpoint-rule value of the fourth power of the L4 norm."""
    return float(np.sum(f.values ** 4) * f.grid.cell_area)


def _dirichlet_energy(values: np.ndarray, bottom, right, top, left, dx: float, dy: float) -> float:
    # interior faces plus a half cell at each boundary face, where the
    # gradient is (f_cell - g) / (h / 2)
    e = np.sum(np.diff(values, axis=0) ** 2) * dy / dx
    e += np.sum(np.diff(values, axis=1) ** 2) * dx / dy
    e += 2.0 * dy / dx * (np.sum((values[0, :] - left) ** 2) + np.sum((values[-1, :] - right) ** 2))
    e += 2.0 * dx / dy * (np.sum((values[:, 0] - bottom) ** 2) + np.sum((values[:, -1] - top) ** 2))
    return float(e)


def grad_norm_sq(f: ScalarField, dirichlet_trace: BoundaryTrace) -> float:
    """Discrete ``||grad f||^2`` with the boundary values taken from the trace.

    This is exactly ``-(f, Lap_h f)`` for the ghost-cell Laplacian with
    zero data, so Rayleigh quotients of discrete eigenvectors are exact.
    """
    _same_grid(f.grid, dirichlet_trace.grid)
    g = f.grid
    return _dirichlet_energy(f.values, *dirichlet_trace.sides(), g.dx, g.dy)


def boundary_integral(q: BoundaryTrace) -> float:
    """Line integral of the trace around the boundary (midpoint rule)."""
    return float(np.dot(q.values, q.weights))


def tangential_derivative(q: BoundaryTrace) -> BoundaryTrace:
    """Centred arclength difference of ``q`` around the closed boundary.

    The sequence is treated as periodic.  On grids with ``dx == dy`` the
    node spacing is uniform, so the weighted sum of the derivative
    telescopes to zero.
    """
    g = q.grid
    s = g.boundary_arclength
    P = g.perimeter
    vals = q.values
    s_next = np.roll(s, -1)
    s_prev = np.roll(s, 1)
    s_next[-1] += P
    s_prev[0] -= P
    d = (np.roll(vals, -1) - np.roll(vals, 1)) / (s_next - s_prev)
    return BoundaryTrace(g, d)


def normal_derivative(f: ScalarField, trace: BoundaryTrace) -> BoundaryTrace:
    """Outward normal derivative at the boundary nodes.

    Second-order one-sided difference through the boundary value and the
    first two cell centres, ``(9 f_1 - f_2 - 8 g) / (3 h)`` inward.
    """
    _same_grid(f.grid, trace.grid)
    g = f.grid
    v = f.values
    bottom, right, top, left = trace.sides()
    d_bottom = -(9 * v[:, 0] - v[:, 1] - 8 * bottom) / (3 * g.dy)
    d_top = -(9 * v[:, -1] - v[:, -2] - 8 * top) / (3 * g.dy)
    d_left = -(9 * v[0, :] - v[1, :] - 8 * left) / (3 * g.dx)
    d_right = -(9 * v[-1, :] - v[-2, :] - 8 * right) / (3 * g.dx)
    return BoundaryTrace(g, g.join_trace(d_bottom, d_right, d_top, d_left))


def velocity_l2_norm_sq(w: VectorField2D) -> float:
    """``||w||^2`` summed over the MAC faces (interior faces only)."""
    g = w.grid
    return float((np.sum(w.u[1:-1, :] ** 2) + np.sum(w.v[:, 1:-1] ** 2)) * g.cell_area)


def velocity_grad_norm_sq(w: VectorField2D) -> float:
    """``||grad w||^2`` for a no-slip velocity (ghost reflection at walls)."""
    g = w.grid
    dx, dy = g.dx, g.dy
    u, v = w.u, w.v
    e = np.sum(np.diff(u, axis=0) ** 2) * dy / dx
    ui = u[1:-1, :]
    e += np.sum(np.diff(ui, axis=1) ** 2) * dx / dy
    e += 2.0 * dx / dy * (np.sum(ui[:, 0] ** 2) + np.sum(ui[:, -1] ** 2))
    e += np.sum(np.diff(v, axis=1) ** 2) * dx / dy
    vi = v[:, 1:-1]
    e += np.sum(np.diff(vi, axis=0) ** 2) * dy / dx
    e += 2.0 * dy / dx * (np.sum(vi[0, :] ** 2) + np.sum(vi[-1, :] ** 2))
    return float(e)
