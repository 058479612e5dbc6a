import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lefsolver.quadrature import cumulative, gl15, integrate, integrate_segments


def test_gl15_exact_for_degree_29():
    v = gl15(lambda x: x ** 29 + x ** 2, 0.0, 1.0)
    assert v[0] == pytest.approx(1 / 30 + 1 / 3, rel=1e-14)


def test_integrate_singular_endpoint_within_depth_limit():
    # bisection stops at depth 40; the panel [0, 2^-40] of x^-1/2 carries ~2e-6
    v, err = integrate(lambda x: 1 / np.sqrt(x), 0.0, 1.0, abs_tol=1e-12)
    assert v == pytest.approx(2.0, abs=1e-7)


def test_reversed_and_empty_interval():
    assert integrate(np.exp, 1.0, 0.0)[0] == pytest.approx(-(np.e - 1), rel=1e-13)
    assert integrate(np.exp, 2.0, 2.0) == (0.0, 0.0)


def test_segments_vectorized():
    a = np.array([0.0, 1.0, 2.0])
    v, e = integrate_segments(np.cos, a, a + 1)
    np.testing.assert_allclose(v, np.sin(a + 1) - np.sin(a), rtol=1e-13)
    assert np.all(e >= 0)


@settings(max_examples=40, deadline=None)
@given(st.floats(-3, 3), st.floats(0.01, 5))
def test_cumulative_additive(a, width):
    nodes = np.linspace(a, a + width, 7)
    c, _ = cumulative(np.exp, nodes)
    np.testing.assert_allclose(c, np.exp(nodes) - np.exp(a), rtol=1e-12, atol=1e-13)
