import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from gmokw import checks, family, moments
from gmokw.baselines import Exponential, Power, Weibull
from gmokw.errors import (
    ArgumentError,
    BranchError,
    DivergenceError,
    InsufficientEquationsError,
    RegimeError,
)
from gmokw.moments import EntropyQuery, PWMQuery

UNIT_EXP = family.make_spec(Exponential(1.0))


def _spec(theta, alpha, a=1.4, b=0.9, base=None):
    return family.make_spec(base or Weibull(1.0, 1.5), theta, alpha, a, b, variant="GMOKwG")


# -- probability weighted moments ------------------------------------------------------

def test_pwm_examples():
    assert moments.pwm_kw(PWMQuery(0, 0, 0, 1.7, 0.6, Weibull(1.0, 2.0))) == pytest.approx(1.0, rel=1e-12)
    assert moments.pwm_kw(PWMQuery(1, 1, 1, 1.0, 1.0, Power(1.0, 1.0))) == pytest.approx(1 / 12, rel=1e-12)
    assert moments.pwm_kw(PWMQuery(1, 0, 0, 1.0, 1.0, Exponential(2.5))) == pytest.approx(0.4, rel=1e-12)


def test_pwm_query_validation():
    with pytest.raises(ArgumentError):
        PWMQuery(-1, 0, 0, 1.0, 1.0, Exponential(1.0))
    with pytest.raises(ArgumentError):
        PWMQuery(1, 0, 0, 0.0, 1.0, Exponential(1.0))


# -- raw moments -------------------------------------------------------------------------

def test_moment_quadrature_examples():
    assert moments.moment_quadrature(_spec(2.0, 0.5), 0) == 1.0
    assert moments.moment_quadrature(UNIT_EXP, 1) == pytest.approx(1.0, rel=1e-12)
    assert moments.moment_quadrature(UNIT_EXP, 2) == pytest.approx(2.0, rel=1e-12)


def test_moment_quadrature_self_convergence():
    spec = _spec(1.8, 0.6, 2.1, 0.7, Weibull(0.8, 1.3))
    coarse = moments.moment_quadrature(spec, 1, rtol=1e-10)
    fine = moments.moment_quadrature(spec, 1, rtol=1e-13)
    assert abs(coarse - fine) <= 1e-9 * abs(fine)


def test_moment_quadrature_matches_scipy():
    spec = _spec(1.8, 0.6, 2.1, 0.7)
    ref, _ = integrate.quad(lambda t: t * family.pdf(spec, t), 0, np.inf, epsabs=0, epsrel=1e-12, limit=200)
    assert moments.moment_quadrature(spec, 1) == pytest.approx(ref, rel=1e-9)


@pytest.mark.parametrize("s", [1, 2])
def test_series_routes_low_alpha(s):
    spec = _spec(1.6, 0.5)
    ref = moments.moment_quadrature(spec, s)
    for route in ("A", "B"):
        assert moments.moment_series(spec, s, route) == pytest.approx(ref, rel=1e-6)
    with pytest.raises(RegimeError):
        moments.moment_series(spec, s, "C")


@pytest.mark.parametrize("s", [1, 2])
def test_series_route_high_alpha(s):
    spec = _spec(1.6, 2.5)
    assert moments.moment_series(spec, s, "C") == pytest.approx(moments.moment_quadrature(spec, s), rel=1e-6)
    with pytest.raises(RegimeError):
        moments.moment_series(spec, s, "A")


def test_heavy_tail_moment_diverges():
    # Lomax-like tail: Frechet with shape 1 has no mean
    from gmokw.baselines import Frechet

    spec = family.make_spec(Frechet(1.0, 1.0), theta=1.0, alpha=1.0, a=1.0, b=1.0)
    with pytest.raises(DivergenceError):
        moments.moment_quadrature(spec, 1)


# -- moment generating function -----------------------------------------------------------

def test_mgf_examples():
    assert moments.mgf(_spec(2.0, 0.5), 0.0) == 1.0
    assert moments.mgf(UNIT_EXP, 0.5) == pytest.approx(2.0, rel=1e-10)


def test_mgf_series_matches_quadrature():
    spec = _spec(1.3, 0.5)
    assert moments.mgf(spec, 0.3, "series") == pytest.approx(moments.mgf(spec, 0.3), rel=1e-7)


def test_mgf_slope_at_zero_is_mean():
    spec = _spec(1.3, 0.5)
    h = 1e-5
    slope = (moments.mgf(spec, h) - moments.mgf(spec, -h)) / (2 * h)
    assert slope == pytest.approx(moments.moment_quadrature(spec, 1), rel=1e-6)


def test_mgf_beyond_decay_rate_diverges():
    with pytest.raises(DivergenceError):
        moments.mgf(UNIT_EXP, 1.5)


# -- Renyi entropy -------------------------------------------------------------------------

def test_renyi_unit_exponential():
    # -log(lambda) + log(delta) / (delta - 1) at lambda = 1, delta = 2
    assert moments.renyi(EntropyQuery(2.0, UNIT_EXP)) == pytest.approx(math.log(2), rel=1e-10)


@pytest.mark.parametrize("alpha,delta", [(0.5, 2.0), (2.0, 0.5), (0.5, 0.5), (2.0, 2.0)])
def test_renyi_series_matches_quadrature(alpha, delta):
    q = EntropyQuery(delta, _spec(1.5, alpha, 1.6, 1.2))
    assert moments.renyi(q, "series") == pytest.approx(moments.renyi(q), rel=1e-6)


def test_renyi_order_validation():
    for bad in (1.0, 0.0, -2.0):
        with pytest.raises(ArgumentError):
            EntropyQuery(bad, UNIT_EXP)


# -- method-of-moments closed forms -----------------------------------------------------------

def test_mom_expectation_examples():
    spec = family.make_spec(Exponential(1.0), theta=1.0, alpha=0.5)
    assert moments.mom_expectation(spec, 1) == pytest.approx(math.log(2), abs=1e-12)
    assert moments.mom_expectation(spec, 2) == pytest.approx(0.5, abs=1e-12)
    spec = family.make_spec(Exponential(1.0), theta=0.5, alpha=0.3)
    assert abs(moments.mom_expectation(spec, 2) - moments.mom_expectation_quadrature(spec, 2)) <= 1e-8


def test_mom_expectation_outside_branches():
    spec = family.make_spec(Exponential(1.0), theta=3.0, alpha=0.3)
    with pytest.raises(BranchError):
        moments.mom_expectation(spec, 2)


@settings(max_examples=40, deadline=None)
@given(theta=st.floats(0.3, 3.0), alpha=st.floats(0.2, 4.0), nu=st.integers(1, 4))
def test_mom_expectation_bounds_and_oracle(theta, alpha, nu):
    spec = family.make_spec(Exponential(1.0), theta=theta, alpha=alpha, variant="GMO")
    quad = moments.mom_expectation_quadrature(spec, nu)
    lo, hi = min(alpha, 1.0) ** nu, max(alpha, 1.0) ** nu
    assert lo - 1e-12 <= quad <= hi + 1e-12
    try:
        closed = moments.mom_expectation(spec, nu)
    except BranchError:
        return
    assert abs(closed - quad) <= 1e-8


def test_incomplete_beta():
    assert moments.incomplete_beta(0.3, 1, 1) == pytest.approx(0.7, rel=1e-14)
    assert moments.incomplete_beta(0.0, 2.5, 1.5) == pytest.approx(math.gamma(2.5) * math.gamma(1.5) / math.gamma(4), rel=1e-13)
    # int_{1/2}^1 u (1-u)^2 du = 5/192
    assert moments.incomplete_beta(0.5, 2, 3) == pytest.approx(5 / 192, rel=1e-13)
    lower, _ = integrate.quad(lambda u: u**1.2 * (1 - u) ** 0.4, 0, 0.35, epsabs=0, epsrel=1e-13)
    total = math.gamma(2.2) * math.gamma(1.4) / math.gamma(3.6)
    assert moments.incomplete_beta(0.35, 2.2, 1.4) + lower == pytest.approx(total, rel=1e-12)
    with pytest.raises(ArgumentError):
        moments.incomplete_beta(1.5, 1, 1)


def test_mom_estimate_recovers_alpha():
    truth = family.make_spec(Exponential(1.0), theta=1.0, alpha=0.5)
    data = family.sample(truth, 5000, seed=77).values
    start = family.make_spec(Exponential(1.0), theta=1.0, alpha=0.9, variant="GMOKwG")
    est = moments.mom_estimate(data, start, ["alpha"], [1])
    assert abs(est.spec.family.alpha - 0.5) <= 0.05
    assert est.success


def test_mom_residual_at_truth_is_sampling_noise():
    truth = family.make_spec(Exponential(1.0), theta=1.0, alpha=0.5)
    data = family.sample(truth, 5000, seed=78).values
    S = np.exp(-data)
    resid = [np.mean((1 - 0.5 * S) ** nu) - moments.mom_expectation(truth, nu) for nu in (1, 2)]
    assert np.linalg.norm(resid) <= 3 / math.sqrt(data.size)


def test_mom_estimate_needs_enough_equations():
    start = family.make_spec(Exponential(1.0), theta=1.2, alpha=0.9, variant="GMOKwG")
    with pytest.raises(InsufficientEquationsError):
        moments.mom_estimate(np.array([1.0, 2.0]), start, ["alpha", "theta"], [1])


def test_density_integral_is_one_for_random_specs():
    rng = np.random.default_rng(0)
    for kind in ("exponential", "power", "exp-pareto", "lomax"):
        spec = checks.random_spec(rng, kind)
        assert abs(moments.density_integral(spec) - 1) <= 1e-8
