import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from thermosolutal.domain import (BoundaryTrace, Grid2D, ScalarField, VectorField2D, boundary_integral,
                                  grad_norm_sq, l2_norm_sq, l4_norm_4, normal_derivative,
                                  tangential_derivative, velocity_grad_norm_sq, velocity_l2_norm_sq)
from thermosolutal.errors import GridMismatchError, InvalidFieldError

SINE = lambda x, y: np.sin(np.pi * x) * np.sin(np.pi * y)


@pytest.fixture
def g():
    return Grid2D(64, 64)


def test_grid_rejects_bad_sizes():
    with pytest.raises(ValueError):
        Grid2D(2, 8)
    with pytest.raises(ValueError):
        Grid2D(8, 8, lx=-1.0)


def test_boundary_nodes_counterclockwise(g):
    x, y = g.boundary_xy
    assert len(x) == g.n_boundary == 256
    # first node on the bottom, then the right side going up
    assert y[0] == 0 and x[g.nx] == 1.0 and y[g.nx + 1] > y[g.nx]
    assert np.isclose(g.boundary_weights.sum(), g.perimeter)


def test_field_validation(g):
    with pytest.raises(InvalidFieldError):
        ScalarField(g, np.zeros((3, 3)))
    with pytest.raises(InvalidFieldError):
        ScalarField(g, np.full(g.shape, np.nan))


def test_sine_mode_integrals(g):
    # midpoint rule is exact for these trigonometric polynomials
    f = ScalarField.from_function(g, SINE)
    assert l2_norm_sq(f) == pytest.approx(0.25, abs=1e-13)
    assert l4_norm_4(f) == pytest.approx(9 / 64, abs=1e-13)
    assert grad_norm_sq(f, BoundaryTrace.zeros(g)) == pytest.approx(np.pi**2 / 2, rel=1e-3)


def test_grad_norm_with_boundary_data(g):
    # f = x has ||grad f||^2 = 1; the trace carries the boundary values exactly
    f = ScalarField.from_function(g, lambda x, y: x + 0 * y)
    tr = BoundaryTrace.from_function(g, lambda x, y: x)
    assert grad_norm_sq(f, tr) == pytest.approx(1.0, rel=1e-12)


def test_normal_derivative_linear(g):
    f = ScalarField.from_function(g, lambda x, y: 2 * x + 3 * y)
    tr = BoundaryTrace.from_function(g, lambda x, y: 2 * x + 3 * y)
    b, r, t, l = normal_derivative(f, tr).sides()
    assert np.allclose(b, -3) and np.allclose(r, 2) and np.allclose(t, 3) and np.allclose(l, -2)


def test_tangential_derivative_of_x_on_bottom(g):
    tr = BoundaryTrace.from_function(g, lambda x, y: x)
    b, r, t, l = tangential_derivative(tr).sides()
    assert np.allclose(b[1:-1], 1.0)
    assert np.allclose(t[1:-1], -1.0)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=256, max_size=256))
def test_tangential_derivative_integrates_to_zero(vals):
    g = Grid2D(64, 64)
    d = tangential_derivative(BoundaryTrace(g, np.array(vals)))
    assert abs(boundary_integral(d)) <= 1e-9 * (1 + np.max(np.abs(vals)) * g.n_boundary)


def test_grid_mismatch():
    a, b = Grid2D(8, 8), Grid2D(16, 16)
    with pytest.raises(GridMismatchError):
        normal_derivative(ScalarField.zeros(a), BoundaryTrace.zeros(b))


def test_streamfunction_velocity_is_divergence_free(g):
    w = VectorField2D.from_streamfunction(g, lambda x, y: (np.sin(np.pi * x) * np.sin(np.pi * y)) ** 2)
    assert np.max(np.abs(w.divergence())) < 1e-12
    assert w.wall_flux() == 0
    # u = 2 pi S(x)^2 S(y) C(y): int u^2 = (3/8) (4 pi^2) (1/8), same for v
    assert velocity_l2_norm_sq(w) == pytest.approx(3 * np.pi**2 / 8, rel=5e-3)
    assert velocity_grad_norm_sq(w) > 0
