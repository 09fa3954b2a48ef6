"""Self-check suites: each compares a computation with an independent route.

Every suite returns a :class:`SuiteResult` with the number of cases, the
number that failed and the worst observed error against its tolerance. The
default sizes keep each suite to a few seconds; callers can enlarge them.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import expansions, family, inference, moments, shape
from .baselines import (
    BASELINES,
    Exponential,
    ExponentiatedPareto,
    Power,
    Weibull,
)
from .errors import ArgumentError
from .family import FamilyParams, ModelSpec, Variant

__all__ = [
    "SuiteResult",
    "SUITES",
    "ROUNDTRIP_PROBS",
    "random_baseline",
    "random_spec",
    "run_suite",
]

ROUNDTRIP_PROBS = (1e-6, 0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.8, 0.9, 0.95, 0.99, 1 - 1e-6)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    cases: int
    failures: int
    worst: float
    tol: float
    seconds: float
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = (
            f"{self.name:<14s}{status}  {self.cases - self.failures}/{self.cases} cases, "
            f"worst error {self.worst:.3g} (tol {self.tol:g}), {self.seconds:.1f}s"
        )
        return text + (f"  [{self.note}]" if self.note else "")


# -- random parameter draws -----------------------------------------------------

def _loguniform(rng, lo, hi, size=None):
    return np.exp(rng.uniform(math.log(lo), math.log(hi), size))


def random_baseline(rng, kind, lo=0.3, hi=3.0):
    cls = BASELINES[kind]
    n = len(cls().param_names)
    return cls(*_loguniform(rng, lo, hi, n))


def random_spec(rng, kind="weibull", variant=Variant.GMOKWG, alpha_range=(0.3, 3.0), lo=0.3, hi=3.0):
    """A random spec with log-uniform parameters.

    Bounded baselines lose mass to rounding in t near their finite endpoint
    when the density exponent there is small, so draws with
    ``theta * b < 0.6`` (power) or ``a * gamma < 0.6`` (exp-pareto) are
    redrawn.
    """
    variant = Variant.parse(variant)
    while True:
        base = random_baseline(rng, kind, lo, hi)
        th, a, b = _loguniform(rng, lo, hi, 3)
        al = float(_loguniform(rng, *alpha_range))
        fam = dict(theta=th, alpha=al, a=a, b=b)
        for name in variant.fixed:
            fam[name] = 1.0
        if isinstance(base, Power) and fam["theta"] * fam["b"] < 0.6:
            continue
        if isinstance(base, ExponentiatedPareto) and fam["a"] * base.gamma < 0.6:
            continue
        return ModelSpec(variant, FamilyParams(**fam), base)


def _rel(x, ref, floor=0.0):
    x, ref = np.asarray(x, dtype=float), np.asarray(ref, dtype=float)
    return np.abs(x - ref) / np.maximum(np.abs(ref), floor)


class _Tally:
    def __init__(self, name, tol):
        self.name, self.tol = name, tol
        self.cases = self.failures = 0
        self.worst = 0.0
        self.start = time.perf_counter()
        self.notes = []

    def add(self, err, tol=None):
        err = float(np.max(err)) if np.size(err) else 0.0
        tol = self.tol if tol is None else tol
        self.cases += 1
        bad = not (err <= tol)
        self.failures += bad
        # a case with its own tolerance is reported on the suite's scale
        scaled = err * self.tol / tol if tol > 0 and self.tol > 0 else err
        self.worst = max(self.worst, scaled) if math.isfinite(err) else math.inf
        return not bad

    def result(self):
        return SuiteResult(
            self.name, self.cases, self.failures, self.worst, self.tol,
            time.perf_counter() - self.start, "; ".join(self.notes),
        )


# -- suites --------------------------------------------------------------------------

def check_normalization(n_specs=100, seed=0, tol=1e-8):
    """Density integrates to one, by quadrature in u = G(t)."""
    rng = np.random.default_rng(seed)
    tally = _Tally("normalization", tol)
    kinds = list(BASELINES)
    for i in range(n_specs):
        spec = random_spec(rng, kinds[i % len(kinds)])
        tally.add(abs(moments.density_integral(spec) - 1.0))
    return tally.result()


def check_roundtrip(n_specs=50, seed=1, tol=1e-10):
    """cdf(quantile(p)) recovers p."""
    rng = np.random.default_rng(seed)
    tally = _Tally("roundtrip", tol)
    kinds = list(BASELINES)
    p = np.array(ROUNDTRIP_PROBS)
    for i in range(n_specs):
        spec = random_spec(rng, kinds[i % len(kinds)])
        tally.add(np.abs(family.cdf(spec, family.quantile(spec, p)) - p))
    return tally.result()


def check_series(n_specs=10, n_points=20, seed=2, tol=1e-8):
    """Series and mixture forms against the closed-form pdf and sf."""
    rng = np.random.default_rng(seed)
    tally = _Tally("series", tol)
    probs = np.linspace(0.02, 0.98, n_points)
    for regime, alpha_range in (("lt1", (0.2, 0.95)), ("gt1", (1.05, 5.0))):
        for i in range(n_specs):
            kind = ("exponential", "weibull", "lomax", "gompertz")[i % 4]
            spec = random_spec(rng, kind, alpha_range=alpha_range)
            t = family.quantile(spec, probs)
            pdf, sf = family.pdf(spec, t), family.sf(spec, t)
            tally.add(_rel(expansions.series_pdf(spec, t), pdf))
            tally.add(_rel(expansions.series_sf(spec, t), sf))
            if regime == "lt1":
                tally.add(_rel(expansions.mixture_pdf(spec, t), pdf))
    return tally.result()


def _brute_power(c, m, K):
    out = np.zeros(K + 1)
    out[0] = 1.0
    for _ in range(m):
        out = np.convolve(out, c)[: K + 1]
    return out


def check_orderstats(seed=3, tol=1e-6, max_n=6):
    """Order-statistic series against direct evaluation, and the power-series
    recursion against repeated polynomial multiplication."""
    rng = np.random.default_rng(seed)
    tally = _Tally("orderstats", tol)
    probs = np.linspace(0.05, 0.95, 12)
    for alpha_range in ((0.3, 0.9), (1.2, 4.0)):
        spec = random_spec(rng, "weibull", alpha_range=alpha_range)
        t = family.quantile(spec, probs)
        for n in range(1, max_n + 1):
            for i in range(1, n + 1):
                direct = expansions.order_stat_pdf_direct(spec, n, i, t)
                tally.add(_rel(expansions.order_stat_pdf_series(spec, n, i, t), direct))
    spec1 = random_spec(rng, "exponential", variant=Variant.MOKWG, alpha_range=(0.3, 0.9))
    t = family.quantile(spec1, probs)
    for n in range(1, max_n + 1):
        for i in range(1, n + 1):
            direct = expansions.order_stat_pdf_direct(spec1, n, i, t)
            tally.add(_rel(expansions.order_stat_pdf_theta1(spec1, n, i, t), direct))
    for m in range(0, 7):
        for K in range(0, 13):
            c = rng.uniform(0.2, 1.0, K + 1)
            d = expansions.power_series_power(c, m, K)
            tally.add(_rel(d, _brute_power(c, m, K), floor=1e-300) if m else np.abs(d - _brute_power(c, m, K)),
                      tol=1e-12)
    return tally.result()


def check_moments(n_specs=4, seed=4, tol=1e-6):
    """Moment series routes and mgf mixture against quantile quadrature; the
    method-of-moments closed forms against their own quadrature."""
    rng = np.random.default_rng(seed)
    tally = _Tally("moments", tol)
    for alpha_range, routes in (((0.45, 0.95), ("A", "B")), ((1.2, 3.0), ("C",))):
        for i in range(n_specs):
            spec = random_spec(rng, ("exponential", "weibull")[i % 2], alpha_range=alpha_range, lo=0.5, hi=2.0)
            for s in (1, 2):
                ref = moments.moment_quadrature(spec, s)
                for route in routes:
                    tally.add(_rel(moments.moment_series(spec, s, route), ref))
            if spec.family.alpha < 1:
                tally.add(_rel(moments.mgf(spec, 0.2, "series"), moments.mgf(spec, 0.2)))
    exact = {(0.5, 1): math.log(2.0), (0.5, 2): 0.5}
    cases = [(1.0, 0.5, 1), (1.0, 0.5, 2), (1.0, 0.3, 3), (0.5, 0.3, 2), (2.0, 0.7, 1), (1.5, 3.0, 1), (0.7, 0.2, 4)]
    for theta, alpha, nu in cases:
        spec = family.make_spec(Exponential(1.0), theta=theta, alpha=alpha)
        closed = moments.mom_expectation(spec, nu)
        tally.add(abs(closed - moments.mom_expectation_quadrature(spec, nu)), tol=1e-8)
        if theta == 1 and (alpha, nu) in exact:
            tally.add(abs(closed - exact[(alpha, nu)]), tol=1e-8)
    return tally.result()


def check_entropy(n_specs=4, seed=5, tol=1e-6):
    """Renyi entropy series against quadrature for delta in {0.5, 2}.

    Shape parameters are drawn from [1, 2.5]: below one the density can have
    an integrable pole at zero whose square is not integrable.
    """
    rng = np.random.default_rng(seed)
    tally = _Tally("entropy", tol)
    for alpha_range in ((0.4, 0.95), (1.2, 3.0)):
        for i in range(n_specs):
            spec = random_spec(rng, ("exponential", "weibull")[i % 2], alpha_range=alpha_range, lo=1.0, hi=2.5)
            for delta in (0.5, 2.0):
                q = moments.EntropyQuery(delta, spec)
                tally.add(_rel(moments.renyi(q, "series"), moments.renyi(q), floor=1.0))
    return tally.result()


GENESIS_CASES = ((1, 0.5), (2, 0.5), (3, 2.0))


def check_genesis(n=50000, seed=6, tol=0.0122):
    """Kolmogorov-Smirnov distance of the min/max-of-geometric construction to
    the closed-form cdf."""
    tally = _Tally("genesis", tol)
    base = Weibull(1.0, 1.5)
    a, b = 1.5, 0.8
    for k, (theta, alpha) in enumerate(GENESIS_CASES):
        draws = family.simulate_genesis(theta, alpha, a, b, base, n, seed + k).values
        spec = family.make_spec(base, theta, alpha, a, b)
        tally.add(stats.kstest(draws, lambda x: family.cdf(spec, x)).statistic)
    return tally.result()


def _fd_step(spec, data, x, j, rel=1e-6):
    h = rel * max(1.0, abs(x[j]))
    e = np.zeros_like(x)
    e[j] = h
    lo, hi = spec.baseline.support
    if spec.with_free(x + e).baseline.support == (lo, hi):
        return h
    # the parameter moves a support edge: stay well inside the data's distance to it
    gap = 1.0
    if math.isfinite(hi):
        gap = min(gap, (hi - np.max(data)) / hi)
    if lo > 0:
        gap = min(gap, (np.min(data) - lo) / lo)
    return min(h, 1e-3 * abs(x[j]) * gap)


def fd_score(spec, data, rel=1e-6):
    """Five-point finite-difference gradient of the log-likelihood."""
    x = spec.free_values
    out = np.empty_like(x)
    f = lambda z: inference.loglik(spec.with_free(z), data)  # noqa: E731
    for j in range(x.size):
        h = _fd_step(spec, data, x, j, rel)
        e = np.zeros_like(x)
        e[j] = h
        out[j] = (8 * (f(x + e) - f(x - e)) - (f(x + 2 * e) - f(x - 2 * e))) / (12 * h)
    return out


def check_gradients(n_points=30, seed=7, tol=1e-6):
    """Analytic score against finite differences of the log-likelihood, per
    variant and baseline; dlog pdf and dlog hrf against finite differences."""
    rng = np.random.default_rng(seed)
    tally = _Tally("gradients", tol)
    kinds = list(BASELINES)
    for variant in Variant:
        for i in range(n_points):
            spec = random_spec(rng, kinds[i % len(kinds)], variant=variant, lo=0.5, hi=2.0)
            data = family.sample(spec, 30, seed=int(rng.integers(2**32))).values
            tally.add(_rel(inference.score(spec, data), fd_score(spec, data), floor=1.0))
    for i in range(n_points):
        spec = random_spec(rng, kinds[i % len(kinds)], lo=0.5, hi=2.0)
        t = family.quantile(spec, np.linspace(0.05, 0.95, 20))
        # relative step: an absolute 1e-6 is not small against t near zero
        h = 1e-6 * t
        lp = lambda x: family.logpdf(spec, x)  # noqa: E731
        lh = lambda x: np.log(family.hrf(spec, x))  # noqa: E731
        tally.add(_rel(shape.dlog_pdf(spec, t), (lp(t + h) - lp(t - h)) / (2 * h), floor=1.0))
        tally.add(_rel(shape.dlog_hrf(spec, t), (lh(t + h) - lh(t - h)) / (2 * h), floor=1.0))
    return tally.result()


def check_hessian(n_points=10, seed=8, tol=1e-4):
    """Closed-form GMOKw-E information against finite differences of the score."""
    rng = np.random.default_rng(seed)
    tally = _Tally("hessian", tol)
    for _ in range(n_points):
        spec = random_spec(rng, "exponential", lo=0.5, hi=2.0)
        data = family.sample(spec, 60, seed=int(rng.integers(2**32))).values
        an = inference.observed_info(spec, data, "analytic_gmokwe")
        fd = inference.observed_info(spec, data, "finite_diff")
        scale = np.sqrt(np.outer(np.abs(np.diag(fd)), np.abs(np.diag(fd))))
        tally.add(np.abs(an - fd) / np.maximum(np.abs(fd), 1e-3 * scale))
    return tally.result()


def check_ordering(n_pairs=20, seed=9, grid_size=400):
    """Likelihood-ratio ordering in alpha for random pairs on every baseline."""
    rng = np.random.default_rng(seed)
    tally = _Tally("ordering", 0.0)
    for kind in BASELINES:
        for _ in range(n_pairs):
            spec = random_spec(rng, kind)
            a1, a2 = np.sort(_loguniform(rng, 0.2, 5.0, 2))
            s1 = ModelSpec(Variant.GMOKWG, FamilyParams(spec.family.theta, a1, spec.family.a, spec.family.b), spec.baseline)
            s2 = ModelSpec(Variant.GMOKWG, FamilyParams(spec.family.theta, a2, spec.family.a, spec.family.b), spec.baseline)
            verdict = shape.check_lr_order(s1, s2, grid_size=grid_size)
            worst = max(verdict.worst.values()) if verdict.conclusive else math.inf
            tally.add(max(worst, 0.0) if verdict.ok else max(worst, 1.0))
    return tally.result()


SUITES = {
    "normalization": check_normalization,
    "roundtrip": check_roundtrip,
    "series": check_series,
    "orderstats": check_orderstats,
    "moments": check_moments,
    "entropy": check_entropy,
    "genesis": check_genesis,
    "gradients": check_gradients,
    "hessian": check_hessian,
    "ordering": check_ordering,
}


def run_suite(name: str, **kwargs) -> SuiteResult:
    try:
        fun = SUITES[name]
    except KeyError:
        raise ArgumentError(f"unknown suite {name!r}; valid suites: {', '.join(SUITES)}") from None
    return fun(**kwargs)
