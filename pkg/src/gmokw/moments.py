"""Moments, probability weighted moments, mgf and Renyi entropy.

The reference value of every expectation is a quantile integral,
``E[h(T)] = int_0^1 h(Q(p)) dp``, evaluated with the graded Gauss-Legendre
rule of :mod:`gmokw.quadrature`. The series routes (through probability
weighted moments of Kw-G) are validators of that reference.

Kw-G integrals use the substitution u = G(t), under which
``f_Kw(t; a, b) dt = a b u^(a-1) (1 - u^a)^(b-1) du`` and only the baseline
inverse is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

from . import family
from .baselines import Baseline, _log1mexp
from .errors import (
    ArgumentError,
    BranchError,
    ConvergenceError,
    InsufficientEquationsError,
    OptimizerError,
    RegimeError,
)
from .expansions import J_MAX, _log_a, _log_c, _log_negbin
from .quadrature import integrate_unit

__all__ = [
    "PWMQuery",
    "EntropyQuery",
    "MomEstimate",
    "pwm_kw",
    "moment_series",
    "moment_quadrature",
    "mgf",
    "renyi",
    "mom_expectation",
    "mom_expectation_quadrature",
    "incomplete_beta",
    "mom_estimate",
    "density_integral",
]

_BLOCK = 32


@dataclass(frozen=True)
class PWMQuery:
    """Gamma_{p,q,r} = E[T^p F_Kw^q S^r] under Kw-G(kw_a, kw_b)."""

    p: float
    q: float
    r: float
    kw_a: float
    kw_b: float
    baseline: Baseline

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise ArgumentError("p and q must be >= 0")
        if not (self.kw_a > 0 and self.kw_b > 0):
            raise ArgumentError("kw_a and kw_b must be > 0")


@dataclass(frozen=True)
class EntropyQuery:
    delta: float
    spec: family.ModelSpec

    def __post_init__(self):
        if not self.delta > 0 or self.delta == 1:
            raise ArgumentError("Renyi order delta must be > 0 and != 1")


def _kw_unit_logs(u, uc, a):
    """log u, log(1 - u^a) and log(1 - (1 - u^a)^b) pieces from (u, 1 - u)."""
    with np.errstate(divide="ignore"):
        log_u = np.where(u < 0.5, np.log(u), np.log1p(-uc))
        log_a = _log1mexp(a * log_u)
    return log_u, log_a


def _pwm_block(baseline, a, b, p, qs, rs, rtol=1e-12):
    """Vector of Gamma_{p, q_k, r_k} integrals sharing one quadrature."""
    qs = np.asarray(qs, dtype=float)
    rs = np.asarray(rs, dtype=float)

    def integrand(u, uc):
        log_u, log_a = _kw_unit_logs(u, uc, a)
        log_s = b * log_a
        with np.errstate(divide="ignore"):
            log_f = _log1mexp(log_s)
        log_w = math.log(a * b) + (a - 1) * log_u + (b - 1) * log_a
        if p:
            t = baseline.from_unit(u, uc)
            with np.errstate(divide="ignore"):
                log_w = log_w + p * np.log(t)
        with np.errstate(invalid="ignore"):
            qf = np.where(qs[None, :] == 0, 0.0, qs[None, :] * log_f[:, None])
        vals = np.exp(log_w[:, None] + qf + rs[None, :] * log_s[:, None])
        return np.nan_to_num(vals, nan=0.0, posinf=np.inf)

    return np.atleast_1d(integrate_unit(integrand, rtol=rtol).value)


def pwm_kw(query: PWMQuery, rtol=1e-12) -> float:
    """Probability weighted moment of Kw-G by quadrature in u = G(t)."""
    return float(
        _pwm_block(query.baseline, query.kw_a, query.kw_b, query.p, [query.q], [query.r], rtol)[0]
    )


def _adaptive_blocks(block_terms, tol, what):
    """Accumulate blocks of terms until one falls below tol times the sum."""
    total = 0.0
    j0 = 0
    while j0 <= J_MAX:
        terms = block_terms(j0, min(j0 + _BLOCK, J_MAX + 1))
        for term in terms:
            total += term
            if j0 > 0 and abs(term) <= tol * abs(total):
                return total
            j0 += 1
    raise ConvergenceError(f"{what}: no convergence within {J_MAX} terms", estimate=total, terms=J_MAX)


def moment_series(spec, s, route, tol=1e-12):
    """E[T^s] from a series of Kw-G probability weighted moments.

    Routes: ``"A"`` sums ``A_j Gamma_{s,0,j+theta-1}`` and ``"B"`` the
    re-expanded double sum over ``B_jk Gamma_{s,j-k,theta-1}`` (both alpha < 1);
    ``"C"`` sums ``theta C_j Gamma_{s,j,theta-1}`` (alpha > 1).
    Route B cancels between terms of alternating sign; if the rounding bound
    on the cancellation exceeds ``tol`` a ConvergenceError is raised.
    """
    theta, alpha, a, b = spec.family.as_tuple()
    base = spec.baseline
    route = str(route).upper()
    if s == 0:
        return 1.0
    if route not in ("A", "B", "C"):
        raise ArgumentError("route must be one of A, B, C")
    if route in ("A", "B") and not alpha < 1:
        raise RegimeError(f"route {route} needs alpha < 1")
    if route == "C" and not alpha > 1:
        raise RegimeError("route C needs alpha > 1")

    if route == "A":
        log_a = _log_a(theta, alpha, J_MAX)

        def block(j0, j1):
            j = np.arange(j0, j1)
            g = _pwm_block(base, a, b, s, np.zeros(j.size), j + theta - 1)
            return np.exp(log_a[j0:j1]) * g

        return _adaptive_blocks(block, tol, "moment route A")

    if route == "C":
        log_c = _log_c(theta, alpha, J_MAX)

        def block(j0, j1):
            j = np.arange(j0, j1)
            g = _pwm_block(base, a, b, s, j, np.full(j.size, theta - 1))
            return theta * np.exp(log_c[j0:j1]) * g

        return _adaptive_blocks(block, tol, "moment route C")

    # route B: inner sums over k reuse Gamma_{s,q,theta-1}, q = 0..j
    a_coef = np.exp(_log_a(theta, alpha, J_MAX))
    q_all = np.arange(J_MAX + 1)
    gammas = np.empty(0)
    total = 0.0
    magnitude = 0.0
    for j in range(J_MAX + 1):
        if gammas.size <= j:
            q = q_all[gammas.size: gammas.size + _BLOCK]
            gammas = np.concatenate(
                [gammas, _pwm_block(base, a, b, s, q, np.full(q.size, theta - 1))]
            )
        k = np.arange(j + 1)
        log_binom = special.gammaln(j + 1) - special.gammaln(k + 1) - special.gammaln(j - k + 1)
        inner = (-1.0) ** (j - k) * np.exp(log_binom) * a_coef[j] * gammas[j - k]
        term = float(inner.sum())
        total += term
        magnitude += float(np.abs(inner).sum())
        if j > 0 and abs(term) <= tol * abs(total):
            bound = magnitude * 1e-13
            if bound > max(tol, 1e-8) * abs(total):
                raise ConvergenceError(
                    f"moment route B: cancellation bound {bound:.2e} exceeds tolerance",
                    estimate=total, terms=j + 1,
                )
            return total
    raise ConvergenceError("moment route B: no convergence", estimate=total, terms=J_MAX)


def _expect(spec, h, rtol=1e-11):
    """int_0^1 h(Q(p)) dp with each tail inverted on its accurate side."""

    def integrand(p, pc):
        return h(family.quantile_pair(spec, p, pc))

    return integrate_unit(integrand, rtol=rtol).value


def moment_quadrature(spec, s, rtol=1e-11) -> float:
    """E[T^s] as int_0^1 Q(p)^s dp; raises DivergenceError for heavy tails."""
    if s == 0:
        return 1.0
    return float(_expect(spec, lambda t: t**s, rtol))


def mgf(spec, s, method="quadrature", tol=1e-12, rtol=1e-11) -> float:
    """Moment generating function E[exp(s T)].

    ``method="series"`` (alpha <= 1) sums the negative-binomial mixture of
    Kw-G(a, b (j + theta)) mgfs, each integrated in u = G(t).
    """
    if s == 0:
        return 1.0
    if method == "quadrature":
        with np.errstate(over="ignore"):
            return float(_expect(spec, lambda t: np.exp(s * t), rtol))
    if method != "series":
        raise ArgumentError("method must be 'quadrature' or 'series'")
    theta, alpha, a, b = spec.family.as_tuple()
    if not alpha <= 1:
        raise RegimeError("the mixture mgf needs alpha <= 1")
    base = spec.baseline
    log_w = _log_negbin(theta, alpha, J_MAX) if alpha < 1 else np.r_[0.0, np.full(J_MAX, -np.inf)]

    def block(j0, j1):
        bj = b * (np.arange(j0, j1) + theta)

        def integrand(u, uc):
            log_u, log_a = _kw_unit_logs(u, uc, a)
            t = base.from_unit(u, uc)
            with np.errstate(over="ignore", divide="ignore"):
                log_w_u = (
                    math.log(a) + np.log(bj)[None, :] + ((a - 1) * log_u + s * t)[:, None]
                    + (bj - 1)[None, :] * log_a[:, None]
                )
            return np.nan_to_num(np.exp(log_w_u), nan=0.0, posinf=np.inf)

        m = np.atleast_1d(integrate_unit(integrand, rtol=rtol).value)
        return np.exp(log_w[j0:j1]) * m

    if alpha == 1:
        return float(block(0, 1)[0])
    return _adaptive_blocks(block, tol, "mgf series")


def renyi(query: EntropyQuery, method="quadrature", tol=1e-12, rtol=1e-11) -> float:
    """Renyi entropy of order delta, log(int f^delta) / (1 - delta)."""
    spec, delta = query.spec, query.delta
    if method == "quadrature":
        val = _expect(spec, lambda t: np.exp((delta - 1) * family.logpdf(spec, t)), rtol)
        return float(math.log(val) / (1 - delta))
    if method != "series":
        raise ArgumentError("method must be 'quadrature' or 'series'")
    theta, alpha, a, b = spec.family.as_tuple()
    if alpha == 1:
        raise RegimeError("the Renyi series needs alpha != 1")
    base = spec.baseline
    nu = delta * (theta + 1)
    j_all = np.arange(J_MAX + 1)
    log_gam = special.gammaln(nu + j_all) - special.gammaln(nu) - special.gammaln(j_all + 1)
    if alpha < 1:
        log_coef = delta * math.log(theta) + delta * theta * math.log(alpha) + j_all * math.log1p(-alpha) + log_gam
    else:
        c = 1 - 1 / alpha
        log_coef = delta * math.log(theta) - delta * math.log(alpha) + j_all * math.log(c) + log_gam

    def block(j0, j1):
        j = np.arange(j0, j1)

        def integrand(u, uc):
            log_u, log_a = _kw_unit_logs(u, uc, a)
            t = base.from_unit(u, uc)
            log_s = b * log_a
            inside = base.in_support(t)
            with np.errstate(divide="ignore", invalid="ignore"):
                log_g = np.where(inside, base.logpdf(np.where(inside, t, 1.0)), -np.inf)
                core = (
                    delta * math.log(a * b) + (delta - 1) * log_g
                    + delta * (a - 1) * log_u + delta * (b * theta - 1) * log_a
                )
                if alpha < 1:
                    extra = j[None, :] * log_s[:, None]
                else:
                    log_f = _log1mexp(log_s)
                    extra = np.where(j[None, :] == 0, 0.0, j[None, :] * log_f[:, None])
                vals = np.exp(core[:, None] + extra)
            return np.where(inside[:, None], np.nan_to_num(vals, nan=0.0), 0.0)

        return np.exp(log_coef[j0:j1]) * np.atleast_1d(integrate_unit(integrand, rtol=rtol).value)

    total = _adaptive_blocks(block, tol, "Renyi series")
    return float(math.log(total) / (1 - delta))


def incomplete_beta(x, m, n) -> float:
    """Upper incomplete beta B_x(m, n) = int_x^1 u^(m-1) (1-u)^(n-1) du."""
    if not 0 <= x <= 1:
        raise ArgumentError("x must lie in [0, 1]")
    if not (m > 0 and n > 0):
        raise ArgumentError("m and n must be > 0")
    return float(special.beta(m, n) * special.betaincc(m, n, x))


def mom_expectation(spec, nu) -> float:
    """E[(1 - (1 - alpha) S(T))^nu] from its closed forms.

    The quantity is free of a, b and the baseline. Branches, tried in order:

    * alpha = 1: 1.
    * theta = 1: ``-(alpha/(1-alpha)) log alpha`` for nu = 1 and
      ``alpha (1 - alpha^(nu-1)) / ((1-alpha)(nu-1))`` for nu >= 2.
    * nu = 1, alpha > 1/2: ``theta sum_i (-(1-alpha)/alpha)^i / (theta + i)``.
    * alpha < 1, nu > theta: ``theta (alpha/(1-alpha))^theta B_alpha(nu - theta, theta)``.

    Anything else raises BranchError; use :func:`mom_expectation_quadrature`.
    """
    theta, alpha = spec.family.theta, spec.family.alpha
    if int(nu) != nu or nu < 1:
        raise ArgumentError("nu must be a positive integer")
    nu = int(nu)
    abar = 1.0 - alpha
    if alpha == 1:
        return 1.0
    if theta == 1:
        if nu == 1:
            return -(alpha / abar) * math.log(alpha)
        return alpha * (1 - alpha ** (nu - 1)) / (abar * (nu - 1))
    if nu == 1 and alpha > 0.5:
        x = -abar / alpha
        total, term_i = 0.0, 1.0
        for i in range(100000):
            term = term_i / (theta + i)
            total += term
            if abs(term) <= 1e-17 * abs(total):
                return theta * total
            term_i *= x
        raise ConvergenceError("nu = 1 series did not converge", estimate=theta * total)
    if alpha < 1 and nu > theta:
        return theta * (alpha / abar) ** theta * incomplete_beta(alpha, nu - theta, theta)
    raise BranchError(
        f"no closed form for theta={theta:g}, alpha={alpha:g}, nu={nu}; use quadrature"
    )


def mom_expectation_quadrature(spec, nu, rtol=1e-13) -> float:
    """Quadrature of E[D^nu]: D(Q(p)) = alpha / (alpha + (1-alpha)(1-p)^(1/theta))."""
    theta, alpha = spec.family.theta, spec.family.alpha

    def integrand(p, pc):
        with np.errstate(divide="ignore"):
            q = np.exp(np.where(p < 0.5, np.log1p(-p), np.log(pc)) / theta)
        return (alpha / (alpha + (1 - alpha) * q)) ** nu

    return float(integrate_unit(integrand, rtol=rtol).value)


def density_integral(spec, upper=None, h=None, rtol=1e-11) -> float:
    """int h(t) f(t) dt from the lower bound to ``upper`` (default: whole support).

    Uses u = G(t) for the baseline only, so the family density enters through
    the ratio f / g; this makes it an oracle independent of the family quantile.
    """
    base = spec.baseline
    top = 1.0 if upper is None else float(base.cdf(np.array([upper]))[0])
    top_c = 0.0 if upper is None else float(base.sf(np.array([upper]))[0])

    def integrand(x, xc):
        u = top * x
        uc = top_c + top * xc if upper is not None else xc
        t = base.from_unit(u, uc)
        ok = base.in_support(t)
        out = np.zeros_like(x)
        if ok.any():
            tt = t[ok]
            vals = np.exp(family.logpdf(spec, tt) - base.logpdf(tt)) * top
            out[ok] = vals if h is None else vals * h(tt)
        return out

    return float(integrate_unit(integrand, rtol=rtol).value)


@dataclass(frozen=True)
class MomEstimate:
    spec: family.ModelSpec
    residual_norm: float
    nu_set: tuple
    success: bool


def mom_estimate(data, start: family.ModelSpec, free, nu_set) -> MomEstimate:
    """Method-of-moments fit matching sample averages of D^nu.

    Parameters
    ----------
    data : array_like or Dataset
        Observations inside the baseline support.
    start : ModelSpec
        Variant (GMOKwG), baseline and the values of the fixed parameters.
    free : sequence of str
        Names of the parameters to estimate (from theta, alpha, a, b and the
        baseline parameter names).
    nu_set : sequence of int
        Moment orders; at least as many as free parameters.
    """
    values = np.asarray(getattr(data, "values", data), dtype=float)
    free = tuple(free)
    nu_set = tuple(int(v) for v in nu_set)
    if len(nu_set) < len(free):
        raise InsufficientEquationsError(
            f"{len(nu_set)} moment equations for {len(free)} free parameters"
        )
    names = family.FAMILY_NAMES + start.baseline.param_names
    unknown = set(free) - set(names)
    if unknown:
        raise ArgumentError(f"unknown parameters {sorted(unknown)}")
    full0 = dict(zip(family.FAMILY_NAMES, start.family.as_tuple()))
    full0.update(zip(start.baseline.param_names, start.baseline.params))

    def build(x):
        vals = dict(full0)
        vals.update(zip(free, np.exp(x)))
        base = start.baseline.with_params([vals[n] for n in start.baseline.param_names])
        return family.make_spec(base, *(vals[n] for n in family.FAMILY_NAMES), variant="GMOKwG")

    def expectation(spec, nu):
        try:
            return mom_expectation(spec, nu)
        except BranchError:
            return mom_expectation_quadrature(spec, nu)

    def residuals(x):
        spec = build(x)
        th, al, a, b = spec.family.as_tuple()
        logG = spec.baseline.logcdf(values)
        S = np.exp(b * _log1mexp(a * logG))
        d = 1 - (1 - al) * S
        r = np.array([np.mean(d**nu) - expectation(spec, nu) for nu in nu_set])
        # D is identically 1 at alpha = 1, so every equation has a spurious root
        # there; dividing by 1 - alpha removes it (the residuals are O(1 - alpha))
        return r / (1 - al) if al != 1.0 else r

    def objective(x):
        try:
            r = residuals(x)
        except (ValueError, ArithmeticError):
            return 1e10
        val = float(np.sum(r**2))
        return val if math.isfinite(val) else 1e10

    x0 = np.log([full0[n] for n in free])
    res = optimize.minimize(
        objective, x0, method="Nelder-Mead",
        options=dict(xatol=1e-10, fatol=1e-16, maxiter=4000 * max(1, len(free))),
    )
    if not np.all(np.isfinite(res.x)):
        raise OptimizerError("method-of-moments optimiser failed", trace=res)
    spec = build(res.x)
    return MomEstimate(spec, float(np.sqrt(np.sum(residuals(res.x) ** 2))), nu_set, bool(res.success))
