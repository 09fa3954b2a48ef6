import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from gmokw import checks, family, moments
from gmokw.baselines import BASELINES, Exponential, Power, Weibull
from gmokw.errors import ArgumentError, DomainError, ParameterError
from gmokw.family import FamilyParams, ModelSpec, Variant
from gmokw.quadrature import integrate_interval

@st.composite
def specs(draw, kinds=tuple(BASELINES)):
    seed = draw(st.integers(0, 2**32 - 1))
    kind = draw(st.sampled_from(kinds))
    return checks.random_spec(np.random.default_rng(seed), kind)


def test_full_reduction_pdf():
    spec = family.make_spec(Exponential(1.0))
    assert spec.variant is Variant.BASELINE
    assert family.pdf(spec, 1.0) == pytest.approx(math.exp(-1), rel=1e-15)


def test_density_at_lower_bound_gmo_exponential():
    # theta alpha^theta g(0) / alpha^(theta+1) = 2 * 0.25 / 0.125
    spec = family.make_spec(Exponential(1.0), theta=2.0, alpha=0.5)
    assert family.pdf(spec, 0.0) == pytest.approx(4.0, rel=1e-14)


def test_kw_over_uniform_is_t_squared():
    spec = family.make_spec(Power(1.0, 1.0), a=2.0, b=1.0)
    assert spec.variant is Variant.KWG
    assert family.cdf(spec, 0.5) == pytest.approx(0.25, rel=1e-15)


@pytest.mark.parametrize("kind", list(BASELINES))
def test_cdf_zero_at_lower_bound_and_outside_support(kind):
    spec = checks.random_spec(np.random.default_rng(1), kind)
    lo, hi = spec.baseline.support
    assert family.cdf(spec, lo) == 0.0
    assert family.sf(spec, lo) == 1.0
    below = lo - 1.0
    assert family.pdf(spec, below) == 0.0 and family.cdf(spec, below) == 0.0
    if math.isfinite(hi):
        assert family.pdf(spec, hi + 1) == 0.0 and family.cdf(spec, hi + 1) == 1.0


@pytest.mark.parametrize("kind", list(BASELINES))
def test_cdf_matches_integrated_pdf(kind):
    rng = np.random.default_rng(5)
    for _ in range(3):
        spec = checks.random_spec(rng, kind)
        lo = spec.baseline.support[0]
        for t in family.quantile(spec, np.array([0.2, 0.5, 0.9])):
            integral = integrate_interval(lambda x: family.pdf(spec, x), lo, t, rtol=1e-12).value
            assert abs(family.cdf(spec, t) - integral) <= 1e-8


def test_exponential_hazard_is_constant():
    spec = family.make_spec(Exponential(2.5))
    t = np.linspace(0.01, 5, 50)
    np.testing.assert_allclose(family.hrf(spec, t), 2.5, rtol=1e-13)


@settings(max_examples=40, deadline=None)
@given(spec=specs())
def test_ratio_identities(spec):
    t = family.quantile(spec, np.linspace(0.02, 0.98, 25))
    pdf, cdf, sf = family.pdf(spec, t), family.cdf(spec, t), family.sf(spec, t)
    assert np.all(pdf >= 0)
    assert np.all(np.diff(cdf) >= 0)
    assert np.max(np.abs(cdf + sf - 1)) <= 1e-15
    np.testing.assert_allclose(family.hrf(spec, t), pdf / sf, rtol=1e-12)
    np.testing.assert_allclose(family.rhrf(spec, t), pdf / cdf, rtol=1e-12)
    assert np.max(np.abs(family.chrf(spec, t) + np.log(sf))) <= 1e-12


def test_hazard_undefined_at_endpoint():
    spec = family.make_spec(Exponential(1.0), theta=2.0)
    with pytest.raises(DomainError):
        family.hrf(spec, 0.0)


def test_quantile_examples():
    base = family.make_spec(Exponential(1.0))
    assert family.quantile(base, 0.5) == pytest.approx(math.log(2), rel=1e-15)
    spec = family.make_spec(Weibull(1.3, 0.7), theta=1.7, alpha=0.4, a=2.2, b=0.6)
    assert family.quantile(spec, 0.0) == 0.0
    assert abs(family.cdf(spec, family.quantile(spec, 0.3)) - 0.3) <= 1e-10
    for bad in (-0.01, 1.0, 2.0):
        with pytest.raises(ArgumentError):
            family.quantile(spec, bad)


@settings(max_examples=50, deadline=None)
@given(spec=specs(), p=st.sampled_from(checks.ROUNDTRIP_PROBS))
def test_quantile_roundtrip_property(spec, p):
    assert abs(family.cdf(spec, family.quantile(spec, p)) - p) <= 1e-10


def test_sample_is_deterministic_and_open():
    spec = family.make_spec(Weibull(1.0, 1.5), theta=2.0, alpha=0.5, a=1.5, b=0.8)
    a = family.sample(spec, 1000, seed=42).values
    b = family.sample(spec, 1000, seed=42).values
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, family.sample(spec, 1000, seed=43).values)
    assert np.all(a > 0) and np.all(np.isfinite(a))
    assert family.sample(spec, 0, seed=1).values.size == 0


def test_sample_distribution():
    spec = family.make_spec(Weibull(1.0, 1.5), theta=2.0, alpha=0.5, a=1.5, b=0.8)
    x = family.sample(spec, 100_000, seed=2024).values
    assert stats.kstest(x, lambda v: family.cdf(spec, v)).statistic <= 0.0122
    mean = moments.moment_quadrature(spec, 1)
    assert abs(x.mean() - mean) <= 4 * x.std() / math.sqrt(x.size)


def test_genesis_degenerate_case_is_kumaraswamy():
    base = Weibull(1.0, 1.5)
    draws = family.simulate_genesis(1, 1.0, 1.5, 0.8, base, 20_000, seed=3).values
    kw = family.kw_spec(base, 1.5, 0.8)
    assert stats.kstest(draws, lambda v: family.cdf(kw, v)).statistic <= 0.0122


@pytest.mark.parametrize("theta,alpha", [(2, 0.5), (3, 2.0)])
def test_genesis_matches_closed_form(theta, alpha):
    base = Weibull(1.0, 1.5)
    draws = family.simulate_genesis(theta, alpha, 1.5, 0.8, base, 50_000, seed=9).values
    spec = family.make_spec(base, theta, alpha, 1.5, 0.8)
    assert stats.kstest(draws, lambda v: family.cdf(spec, v)).statistic <= 0.0122


def test_genesis_rejects_bad_arguments():
    with pytest.raises(ArgumentError):
        family.simulate_genesis(2, 0.0, 1, 1, Exponential(1.0), 10, 0)
    with pytest.raises(ArgumentError):
        family.simulate_genesis(1.5, 0.5, 1, 1, Exponential(1.0), 10, 0)


def test_reduce_examples():
    base = Exponential(1.0)
    full = ModelSpec(Variant.GMOKWG, FamilyParams(1.0, 0.5, 2.0, 3.0), base)
    assert family.reduce(full).variant is Variant.MOKWG
    ones = ModelSpec(Variant.GMOKWG, FamilyParams(1.0, 1.0, 1.0, 1.0), base)
    assert family.reduce(ones).variant is Variant.BASELINE
    near = ModelSpec(Variant.GMOKWG, FamilyParams(1.0000001, 0.5, 2.0, 3.0), base)
    assert family.reduce(near).variant is Variant.GMOKWG


def test_variant_invariants_enforced():
    with pytest.raises(ParameterError, match="requires theta = 1"):
        ModelSpec(Variant.MOKWG, FamilyParams(2.0, 0.5, 1.0, 1.0), Exponential(1.0))
    with pytest.raises(ParameterError):
        FamilyParams(1.0, -0.5, 1.0, 1.0).check()


def test_alpha_bar_is_derived():
    fam = FamilyParams(1.0, 0.3, 1.0, 1.0)
    assert fam.alpha_bar == pytest.approx(0.7)


@pytest.mark.parametrize("name", ["gmokw", "GMOKw-G", "mokw", "kw", "gmo", "mo", "baseline"])
def test_variant_parse(name):
    assert isinstance(Variant.parse(name), Variant)


def test_variant_parse_rejects_unknown():
    with pytest.raises(ArgumentError):
        Variant.parse("beta-weibull")
