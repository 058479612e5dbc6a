import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lefsolver.errors import BracketError, EvalDomainError, SpecError
from lefsolver.problem import (TOL_M, NonlinearityF, NonlinearityG, ProbeConfig, ProblemSpec,
                               WeightP, infimum_g_plus_f, validate_hypotheses)


def spec(g, f, p=None, N=3, a=0.5):
    return ProblemSpec(N, a, g, f, p or WeightP.inverse_power(3.0))


G1 = NonlinearityG.power_singular(1.0)
F_SQRT = NonlinearityF.power(0.5)


@pytest.mark.parametrize("N,a", [(2, 0.5), (3, 0.0), (3, 1.0), (3.5, 0.5)])
def test_spec_rejects_bad_dimension_or_exponent(N, a):
    with pytest.raises(SpecError):
        ProblemSpec(N, a, G1, F_SQRT, WeightP.inverse_power(3.0))


def test_canonical_pair_passes():
    rep = validate_hypotheses(spec(G1, F_SQRT))
    assert rep.passed, rep.failures()
    assert set(rep.checks) == {"g_positive", "g_nonincreasing", "g1_singular_limit",
                               "f_nondecreasing", "f1_ratio_nonincreasing", "f2_limits"}


def test_superlinear_f_fails_f1_with_increasing_witness():
    f = NonlinearityF.from_callable(lambda t: t * t, "square")
    rep = validate_hypotheses(spec(G1, f))
    chk = rep.checks["f1_ratio_nonincreasing"]
    assert not chk.passed
    t1, t2 = chk.witness
    assert t1 < t2 and t2 * t2 / t2 > t1 * t1 / t1
    assert not rep.checks["f2_limits"].passed


def test_increasing_g_fails_at_first_probe_pair():
    g = NonlinearityG.from_callable(lambda t: t, name="identity")
    rep = validate_hypotheses(spec(g, F_SQRT))
    chk = rep.checks["g_nonincreasing"]
    t = ProbeConfig().points()
    assert not chk.passed and chk.witness == (t[0], t[1])


def test_nonfinite_evaluator_names_probe_point():
    g = NonlinearityG.from_callable(lambda t: np.where(t > 1, np.nan, 1 / t), name="bad")
    with pytest.raises(EvalDomainError) as e:
        validate_hypotheses(spec(g, F_SQRT))
    assert e.value.t > 1


def test_probe_grid_needs_200_points():
    with pytest.raises(SpecError):
        validate_hypotheses(spec(G1, F_SQRT), ProbeConfig(n=100))


def test_log_singular_family():
    g = NonlinearityG.log_singular()
    t_c = np.exp(-1e-3)
    assert g(np.array([0.5]))[0] == pytest.approx(np.log(2))
    assert g(np.array([5.0]))[0] == pytest.approx(1e-3)
    # primitive of -log t is t - t log t below the floor crossing, linear above
    prim = lambda t: t - t * np.log(t)
    assert float(g.integral(0.1, t_c)) == pytest.approx(prim(t_c) - prim(0.1), rel=1e-12)
    assert float(g.integral(t_c, 3.0)) == pytest.approx(1e-3 * (3.0 - t_c), rel=1e-12)


def test_table_family_is_monotone_between_nodes():
    t = [0.1, 1.0, 2.0, 10.0]
    f = NonlinearityF.table(t, [0.0, 1.0, 1.2, 3.0])
    x = np.linspace(0.1, 10, 1000)
    assert np.all(np.diff(f(x)) >= -1e-14)
    with pytest.raises(SpecError):
        NonlinearityF.table([1.0, 1.0], [0.0, 1.0])


def test_infimum_am_gm():
    inf = infimum_g_plus_f(spec(G1, NonlinearityF.from_callable(lambda t: t)))
    assert inf.m == pytest.approx(2.0, rel=1e-10)
    assert inf.t_star == pytest.approx(1.0, rel=1e-5)


def test_infimum_sqrt_matches_oracle(oracle):
    o = oracle["infimum_sqrt"]
    inf = infimum_g_plus_f(spec(G1, F_SQRT))
    assert inf.m == pytest.approx(o["m"], rel=1e-10)
    assert inf.t_star == pytest.approx(o["t_star"], rel=1e-5)


def test_infimum_at_boundary_is_flagged():
    zero = NonlinearityF.table([1e-8, 1e8], [0.0, 0.0])
    with pytest.raises(BracketError):
        infimum_g_plus_f(spec(G1, zero))
    inf = infimum_g_plus_f(spec(G1, zero), strict=False)
    assert inf.at_boundary and inf.t_star == pytest.approx(1e8)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.2, 4.0), st.floats(0.05, 0.95))
def test_infimum_below_dense_probe(gamma, q):
    s = spec(NonlinearityG.power_singular(gamma), NonlinearityF.power(q))
    inf = infimum_g_plus_f(s)
    t = np.logspace(-8, 8, 200_001)
    dense = np.min(t ** -gamma + t ** q)
    assert 0 < inf.m <= dense * (1 + TOL_M)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.2, 4.0), st.floats(0.05, 0.95))
def test_validation_deterministic(gamma, q):
    s = spec(NonlinearityG.power_singular(gamma), NonlinearityF.power(q))
    assert validate_hypotheses(s) == validate_hypotheses(s)
