import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gmokw import checks, family, shape
from gmokw.baselines import BASELINES, Exponential, Weibull
from gmokw.errors import ArgumentError, DomainError

UNIT_EXP = family.make_spec(Exponential(1.0))
# Weibull shape 3 tail with a * shape < 1 near zero: decreasing then increasing hazard
BATHTUB = family.make_spec(Weibull(1.0, 3.0), 1.0, 1.0, 0.2, 1.0)
PUBLISHED = family.make_spec(Weibull(0.111, 4.112), theta=0.239, alpha=0.004, a=0.518, b=0.244)


def _fd(fun, t, rel=1e-6):
    h = rel * t
    return (fun(t + h) - fun(t - h)) / (2 * h)


def test_unit_exponential_log_slopes():
    t = np.linspace(0.1, 5, 20)
    np.testing.assert_allclose(shape.dlog_pdf(UNIT_EXP, t), -1.0, rtol=1e-14)
    np.testing.assert_allclose(shape.dlog_hrf(UNIT_EXP, t), 0.0, atol=1e-14)
    assert shape.critical_points(UNIT_EXP, "density") == []
    assert shape.critical_points(UNIT_EXP, "hazard") == []


def test_gmo_exponential_log_slope():
    # a = b = 1 over Exp(1): log f = const - theta t - (theta + 1) log D with S = exp(-t)
    theta, alpha = 2.0, 0.5
    spec = family.make_spec(Exponential(1.0), theta=theta, alpha=alpha)
    t = np.linspace(0.1, 4, 15)
    S = np.exp(-t)
    D = 1 - (1 - alpha) * S
    expected = -theta - (theta + 1) * (1 - alpha) * S / D
    np.testing.assert_allclose(shape.dlog_pdf(spec, t), expected, rtol=1e-12)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), kind=st.sampled_from(list(BASELINES)))
def test_log_slopes_match_finite_differences(seed, kind):
    spec = checks.random_spec(np.random.default_rng(seed), kind, lo=0.5, hi=2.0)
    t = family.quantile(spec, np.linspace(0.05, 0.95, 12))
    lp = lambda x: family.logpdf(spec, x)  # noqa: E731
    lh = lambda x: np.log(family.hrf(spec, x))  # noqa: E731
    assert np.max(checks._rel(shape.dlog_pdf(spec, t), _fd(lp, t), floor=1.0)) <= 1e-6
    assert np.max(checks._rel(shape.dlog_hrf(spec, t), _fd(lh, t), floor=1.0)) <= 1e-6


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), kind=st.sampled_from(["exponential", "weibull"]))
def test_second_log_slopes_match_finite_differences(seed, kind):
    spec = checks.random_spec(np.random.default_rng(seed), kind, lo=0.5, hi=2.0)
    t = family.quantile(spec, np.linspace(0.05, 0.95, 12))
    assert np.max(checks._rel(shape.d2log_pdf(spec, t), _fd(lambda x: shape.dlog_pdf(spec, x), t), floor=1.0)) <= 1e-5
    assert np.max(checks._rel(shape.d2log_hrf(spec, t), _fd(lambda x: shape.dlog_hrf(spec, x), t), floor=1.0)) <= 1e-5


def test_second_slopes_need_analytic_baseline():
    spec = checks.random_spec(np.random.default_rng(0), "lomax")
    with pytest.raises(NotImplementedError):
        shape.d2log_pdf(spec, np.array([1.0]))


def test_slopes_need_interior_points():
    with pytest.raises(DomainError):
        shape.dlog_pdf(UNIT_EXP, 0.0)


def test_published_density_mode():
    cps = shape.critical_points(PUBLISHED, "density")
    maxima = [c for c in cps if c.kind == "maximum"]
    assert maxima
    for c in cps:
        assert abs(shape.dlog_pdf(PUBLISHED, np.array([c.location]))[0]) <= 1e-8
        assert (c.discriminant < 0) == (c.kind == "maximum")


def test_bathtub_hazard_minimum():
    cps = shape.critical_points(BATHTUB, "hazard")
    assert [c.kind for c in cps] == ["minimum"]
    c = cps[0]
    assert c.discriminant > 0
    assert abs(shape.dlog_hrf(BATHTUB, np.array([c.location]))[0]) <= 1e-8
    h = family.hrf(BATHTUB, np.array([0.5 * c.location, c.location, 2 * c.location]))
    assert h[1] < h[0] and h[1] < h[2]


def test_critical_points_rejects_mode():
    with pytest.raises(ArgumentError):
        shape.critical_points(UNIT_EXP, "cdf")


def test_full_reduction_lower_asymptotes():
    # the pdf form is exact; the hrf form drops 1/sf, which is 1/(1 - p) at the probe
    assert shape.asymptote(UNIT_EXP, "lower", "pdf").ratio_at_probe == pytest.approx(1.0, abs=1e-12)
    rep = shape.asymptote(UNIT_EXP, "lower", "hrf")
    assert rep.ratio_at_probe == pytest.approx(1 / (1 - 1e-6), rel=1e-12)


def test_lower_asymptote_example():
    spec = family.make_spec(Exponential(1.0), theta=2.0, alpha=0.5, a=2.0, b=1.0)
    for q in ("pdf", "hrf"):
        assert abs(shape.asymptote(spec, "lower", q).ratio_at_probe - 1) <= 0.01


@pytest.mark.parametrize("quantity", ["pdf", "sf", "hrf"])
def test_upper_asymptotes(quantity):
    spec = family.make_spec(Weibull(1.0, 1.5), theta=1.7, alpha=0.6, a=1.4, b=0.9)
    assert abs(shape.asymptote(spec, "upper", quantity).ratio_at_probe - 1) <= 0.01


def test_asymptote_ratio_improves_toward_endpoint():
    spec = family.make_spec(Weibull(1.0, 1.5), theta=1.7, alpha=0.6, a=1.4, b=0.9)
    far = shape.asymptote(spec, "lower", "pdf", probe=float(family.quantile(spec, 1e-6)))
    near = shape.asymptote(spec, "lower", "pdf", probe=float(family.quantile(spec, 1e-8)))
    assert abs(near.ratio_at_probe - 1) < abs(far.ratio_at_probe - 1)


def test_asymptote_argument_errors():
    with pytest.raises(ArgumentError):
        shape.asymptote(UNIT_EXP, "middle")
    with pytest.raises(ArgumentError):
        shape.asymptote(UNIT_EXP, "lower", "sf")


def _pair(alpha1, alpha2, **kw):
    fam = dict(theta=1.5, a=2.0, b=0.7)
    fam.update(kw)
    return (
        family.make_spec(Exponential(1.0), alpha=alpha1, **fam),
        family.make_spec(Exponential(1.0), alpha=alpha2, **fam),
    )


def test_likelihood_ratio_ordering_example():
    v = shape.check_lr_order(*_pair(0.5, 2.0), grid_size=2000)
    assert v.conclusive and v.ok
    assert set(v.properties) == {"lr", "sf", "hrf", "rhrf"}
    # argument order does not matter
    assert shape.check_lr_order(*reversed(_pair(0.5, 2.0))).ok


def test_ordering_equal_alpha_is_trivially_true():
    assert shape.check_lr_order(*_pair(0.7, 0.7)).ok


def test_ordering_other_differences_are_inconclusive():
    s1, _ = _pair(0.5, 2.0)
    s2 = family.make_spec(Exponential(1.0), theta=1.5, alpha=2.0, a=2.5, b=0.7)
    v = shape.check_lr_order(s1, s2)
    assert not v.conclusive and not v.ok
