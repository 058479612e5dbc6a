import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from lefsolver import _kernels_py, kernels
from lefsolver.grid import RadialGrid, dirichlet_operator

IMPLS = kernels.backends()
finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


def test_backend_selected():
    assert kernels.BACKEND in IMPLS


@pytest.mark.parametrize("name", sorted(IMPLS))
def test_tridiag_matches_dense(name, rng):
    n = 50
    # lower[i] multiplies x[i-1], upper[i] multiplies x[i+1]
    lower = rng.uniform(-1, 0, n)
    upper = rng.uniform(-1, 0, n)
    diag = 3.0 + rng.uniform(0, 1, n)
    rhs = rng.standard_normal(n)
    A = np.diag(diag) + np.diag(lower[1:], -1) + np.diag(upper[:-1], 1)
    x = IMPLS[name].tridiag_solve(lower, diag, upper, rhs)
    np.testing.assert_allclose(x, np.linalg.solve(A, rhs), rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("name", sorted(IMPLS))
def test_laplacian_of_quadratic_is_exact(name):
    r = RadialGrid.graded(1.0, 60, 1.5).nodes
    for N in (3, 5):
        lap = IMPLS[name].radial_laplacian(r, r ** 2, N)
        np.testing.assert_allclose(lap[:-1], 2 * N, rtol=1e-10)
        assert np.isnan(lap[-1])


@pytest.mark.parametrize("name", sorted(IMPLS))
def test_gradient_symmetric_at_center(name):
    r = RadialGrid.uniform(2.0, 40).nodes
    du = IMPLS[name].central_gradient(r, np.cos(r))
    assert du[0] == 0.0
    np.testing.assert_allclose(du[1:-1], -np.sin(r[1:-1]), atol=5e-3)


@pytest.mark.skipif("cython" not in IMPLS, reason="compiled extension not built")
@settings(max_examples=60, deadline=None)
@given(st.integers(3, 80), st.integers(3, 6), st.floats(1.0, 3.0), st.data())
def test_backends_agree(n, N, power, data):
    grid = RadialGrid.graded(1.0, n, power)
    r = grid.nodes
    u = data.draw(arrays(np.float64, n + 1, elements=finite))
    cy, py = IMPLS["cython"], _kernels_py
    np.testing.assert_allclose(cy.radial_laplacian(r, u, N), py.radial_laplacian(r, u, N),
                               rtol=1e-12, atol=1e-9, equal_nan=True)
    np.testing.assert_allclose(cy.central_gradient(r, u), py.central_gradient(r, u),
                               rtol=1e-12, atol=1e-9)
    lower, diag, upper, _ = dirichlet_operator(grid, N)
    rhs = u[:-1]
    a, b = cy.tridiag_solve(lower, diag, upper, rhs), py.tridiag_solve(lower, diag, upper, rhs)
    scale = np.max(np.abs(b)) + 1e-300
    assert np.max(np.abs(a - b)) <= 1e-10 * scale
