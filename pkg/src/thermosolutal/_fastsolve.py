"""
Exact solves of ``(alpha - beta * Lap_h) x = r`` on tensor-product grids.

Each axis carries one of three discrete second-difference operators, all
diagonalised by a real trigonometric transform:

``"cc_dirichlet"``  cell-centred, ghost ``-f`` at both ends   -> DST-II
``"cc_neumann"``    cell-centred, ghost ``+f`` at both ends   -> DCT-II
``"vx_dirichlet"``  interior vertices, zero end values         -> DST-I
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy import fft

_KINDS = ("cc_dirichlet", "cc_neumann", "vx_dirichlet")


def axis_eigenvalues(kind: str, n: int, h: float) -> np.ndarray:
    """Eigenvalues of ``-d^2/dx^2`` in transform order (all >= 0)."""
    if kind == "cc_dirichlet":
        k = np.arange(1, n + 1)
        return 4.0 / h**2 * np.sin(np.pi * k / (2 * n)) ** 2
    if kind == "cc_neumann":
        k = np.arange(n)
        return 4.0 / h**2 * np.sin(np.pi * k / (2 * n)) ** 2
    if kind == "vx_dirichlet":
        # n is the number of interior vertices; the interval has n + 1 cells
        k = np.arange(1, n + 1)
        return 4.0 / h**2 * np.sin(np.pi * k / (2 * (n + 1))) ** 2
    raise ValueError(f"unknown axis kind {kind!r}")


def _forward(x, kind, axis):
    if kind == "cc_dirichlet":
        return fft.dst(x, type=2, axis=axis, norm="ortho")
    if kind == "cc_neumann":
        return fft.dct(x, type=2, axis=axis, norm="ortho")
    return fft.dst(x, type=1, axis=axis, norm="ortho")


def _inverse(x, kind, axis):
    if kind == "cc_dirichlet":
        return fft.idst(x, type=2, axis=axis, norm="ortho")
    if kind == "cc_neumann":
        return fft.idct(x, type=2, axis=axis, norm="ortho")
    return fft.idst(x, type=1, axis=axis, norm="ortho")


class TensorSolver:
    """Fast solver for one operator layout; cheap to reuse across time steps."""

    def __init__(self, kinds: tuple[str, str], shape: tuple[int, int], h: tuple[float, float]):
        for k in kinds:
            if k not in _KINDS:
                raise ValueError(f"unknown axis kind {k!r}")
        self.kinds = tuple(kinds)
        self.shape = tuple(shape)
        ex = axis_eigenvalues(kinds[0], shape[0], h[0])
        ey = axis_eigenvalues(kinds[1], shape[1], h[1])
        self.eig = ex[:, None] + ey[None, :]
        self.singular = kinds[0] == "cc_neumann" and kinds[1] == "cc_neumann"
        self._symbols: dict = {}

    def transform(self, x):
        k0, k1 = self.kinds
        if k0 == k1 == "cc_dirichlet":
            return fft.dstn(x, type=2, axes=(-2, -1), norm="ortho")
        if k0 == k1 == "cc_neumann":
            return fft.dctn(x, type=2, axes=(-2, -1), norm="ortho")
        return _forward(_forward(x, k0, -2), k1, -1)

    def inverse(self, xh):
        k0, k1 = self.kinds
        if k0 == k1 == "cc_dirichlet":
            return fft.idstn(xh, type=2, axes=(-2, -1), norm="ortho")
        if k0 == k1 == "cc_neumann":
            return fft.idctn(xh, type=2, axes=(-2, -1), norm="ortho")
        return _inverse(_inverse(xh, k1, -1), k0, -2)

    def _inverse_symbol(self, alpha, beta):
        alpha = np.asarray(alpha, dtype=float)
        beta = np.asarray(beta, dtype=float)
        key = (alpha.shape, alpha.tobytes(), beta.shape, beta.tobytes())
        inv = self._symbols.get(key)
        if inv is None:
            denom = alpha + beta * self.eig
            if self.singular and np.all(alpha == 0.0):
                denom[..., 0, 0] = np.inf
            inv = 1.0 / denom
            if len(self._symbols) > 16:
                self._symbols.clear()
            self._symbols[key] = inv
        return inv

    def solve(self, rhs: np.ndarray, alpha=0.0, beta=1.0) -> np.ndarray:
        """Solve ``(alpha I + beta (-Lap_h)) x = rhs``.

        ``rhs`` may carry leading batch axes; ``alpha`` and ``beta`` may be
        arrays broadcasting against it (one value per batch member).

        For the pure Neumann operator with ``alpha == 0`` the constant mode
        is projected out and the zero-mean solution is returned.
        """
        rh = self.transform(rhs)
        rh *= self._inverse_symbol(alpha, beta)
        return self.inverse(rh)


@lru_cache(maxsize=64)
def get_solver(kinds: tuple[str, str], shape: tuple[int, int], h: tuple[float, float]) -> TensorSolver:
    return TensorSolver(kinds, shape, h)
