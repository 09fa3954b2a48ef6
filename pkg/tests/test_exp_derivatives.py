import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gmokw import exp_derivatives as xd
from gmokw import family, inference
from gmokw.baselines import Exponential

params_st = st.tuples(
    st.floats(0.4, 3.0), st.floats(0.2, 3.0), st.floats(0.4, 3.0), st.floats(0.4, 3.0), st.floats(0.3, 3.0)
)


def _spec(p):
    theta, alpha, a, b, lam = p
    return family.make_spec(Exponential(lam), theta, alpha, a, b, variant="GMOKwG")


def _data(p, n=150, seed=0):
    return family.sample(_spec(p), n, seed=seed).values


@settings(max_examples=25, deadline=None)
@given(p=params_st)
def test_loglik_agrees_with_generic(p):
    t = _data(p)
    assert xd.gmokwe_loglik(p, t) == pytest.approx(inference.loglik(_spec(p), t), rel=1e-11)


@settings(max_examples=25, deadline=None)
@given(p=params_st)
def test_score_agrees_with_generic(p):
    t = _data(p)
    ours, generic = xd.gmokwe_score(p, t), inference.score(_spec(p), t)
    assert np.max(np.abs(ours - generic) / np.maximum(1.0, np.abs(generic))) <= 1e-9


@settings(max_examples=15, deadline=None)
@given(p=params_st)
def test_hessian_is_derivative_of_score(p):
    t = _data(p)
    x = np.array(p)
    H = xd.gmokwe_hessian(x, t)
    np.testing.assert_allclose(H, H.T, rtol=1e-10, atol=1e-8)
    for j in range(5):
        h = 1e-5 * x[j]
        up, dn = x.copy(), x.copy()
        up[j] += h
        dn[j] -= h
        fd = (xd.gmokwe_score(up, t) - xd.gmokwe_score(dn, t)) / (2 * h)
        assert np.max(np.abs(H[:, j] - fd) / np.maximum(1.0, np.abs(fd))) <= 1e-4


def test_score_vanishes_in_expectation_at_truth():
    # mean score per observation is O(1/sqrt(n)) at the generating parameters
    p = (1.5, 0.8, 1.2, 0.9, 1.0)
    t = _data(p, n=20000, seed=5)
    assert np.all(np.abs(xd.gmokwe_score(p, t)) / t.size <= 0.05)
