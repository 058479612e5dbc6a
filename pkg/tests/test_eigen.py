import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lefsolver.eigen import TOL_EIG, EigenPair, first_eigenpair, hopf_data
from lefsolver.errors import HopfError, PreconditionError
from lefsolver.grid import RadialField, RadialGrid


@pytest.fixture(scope="module")
def ball3():
    return first_eigenpair(3, 1.0, J=2000)


def test_ball_in_r3(ball3, oracle):
    assert abs(ball3.lambda1 - oracle["eigen"]["lambda_N3_R1"]) <= 1e-6
    r = ball3.phi1.r
    sinc = np.sinc(r)  # sin(pi r) / (pi r)
    assert np.max(np.abs(ball3.phi1.values - sinc)) <= 1e-6
    assert ball3.phi1.values[0] == 1.0 and ball3.phi1.values[-1] == 0.0


def test_residual_of_discrete_pair(ball3):
    assert ball3.residual() <= TOL_EIG * ball3.lambda1_h


@pytest.mark.parametrize("N,R,key", [(3, 2.0, "lambda_N3_R2"), (4, 1.0, "lambda_N4_R1"),
                                     (5, 1.0, "lambda_N5_R1")])
def test_other_balls(oracle, N, R, key):
    assert first_eigenpair(N, R, J=2000).lambda1 == pytest.approx(oracle["eigen"][key],
                                                                   abs=1e-6)


def test_raw_eigenvalue_is_second_order(oracle):
    exact = oracle["eigen"]["lambda_N3_R1"]
    e = [abs(first_eigenpair(3, 1.0, J=J, richardson=False).lambda1 - exact)
         for J in (250, 500, 1000)]
    orders = np.log2(np.array(e[:-1]) / np.array(e[1:]))
    assert np.all(orders >= 1.9)


def test_needs_200_intervals():
    with pytest.raises(PreconditionError):
        first_eigenpair(3, 1.0, J=100)


def test_domain_monotonicity():
    lam = [first_eigenpair(3, R, J=400).lambda1 for R in (1.0, 1.5, 2.0)]
    assert lam[0] > lam[1] > lam[2]


@pytest.mark.parametrize("N", [3, 4, 6])
def test_positive_without_sign_change(N):
    phi = first_eigenpair(N, 1.0, J=400).phi1.values
    assert np.all(phi[:-1] > 0) and np.max(phi) == 1.0


def _hopf_holds(ep, hd):
    phi, dphi = ep.phi1.values, ep.phi1.gradient()
    om = phi > hd.theta
    return bool(np.all(np.abs(dphi[~om]) > hd.delta) and np.all(phi[om] > hd.delta))


def test_hopf_on_ball(ball3):
    hd = hopf_data(ball3)
    assert hd.delta > 0 and _hopf_holds(ball3, hd)
    d05 = dict(hd.scan)[0.5]
    phi, dphi = ball3.phi1.values, ball3.phi1.gradient()
    assert d05 == pytest.approx(min(np.min(np.abs(dphi[phi <= 0.5])), np.min(phi[phi > 0.5])))
    assert d05 > 0


def _synthetic(values, R=1.0):
    grid = RadialGrid.uniform(R, values.size - 1)
    return EigenPair(1.0, 1.0, RadialField(grid, values, 3), 3, R)


def test_hopf_linear_profile():
    grid = RadialGrid.uniform(1.0, 200)
    ep = _synthetic(1.0 - grid.nodes)
    hd = hopf_data(ep)
    assert hd.theta == 0.9
    assert hd.delta == pytest.approx(0.9, abs=1 / 200)


def test_hopf_flat_profile_with_boundary_drop():
    # every theta < 0.5 puts all interior nodes in omega: delta = 0.5
    v = np.full(201, 0.5)
    v[-1] = 0.0
    hd = hopf_data(_synthetic(v))
    assert hd.theta == 0.1 and hd.delta == pytest.approx(0.5)


def test_hopf_flat_below_all_thresholds():
    v = np.full(201, 0.05)
    v[-1] = 0.0
    with pytest.raises(HopfError):
        hopf_data(_synthetic(v))


@settings(max_examples=15, deadline=None)
@given(st.integers(3, 7), st.floats(0.3, 5.0))
def test_hopf_inequalities_reassert(N, R):
    ep = first_eigenpair(N, R, J=200, richardson=False)
    assert _hopf_holds(ep, hopf_data(ep))
    assert ep.lambda1 * R * R == pytest.approx(first_eigenpair(N, 1.0, J=200,
                                                               richardson=False).lambda1,
                                               rel=1e-9)
