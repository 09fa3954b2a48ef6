"""Series representations of the family and of its order statistics.

Writing S for the Kw-G(a, b) survival function and F_Kw = 1 - S, the density
admits two expansions depending on which side of one alpha lies:

* alpha < 1: ``f = f_Kw(a, b) * sum_j A_j S^(j + theta - 1)``, equivalently a
  negative-binomial mixture ``sum_j w_j f_Kw(a, b (j + theta))`` with
  ``w_j = A_j / (j + theta)``; the survival function is ``sum_j w_j S^(j + theta)``.
* alpha > 1: with ``c = 1 - 1/alpha``,
  ``f = f_Kw(a, b theta) * sum_j C_j F_Kw^j`` and
  ``sf = S^theta * sum_j C'_j F_Kw^j``.

All coefficients are positive, so the truncated sums are evaluated in log space
without cancellation. These expansions are used as independent checks on the
closed-form evaluators in :mod:`gmokw.family`, not as the primary route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from . import family
from .baselines import _log1mexp
from .errors import ArgumentError, ConvergenceError

__all__ = [
    "CoefficientTable",
    "OrderStatCoefficients",
    "coeffs",
    "series_pdf",
    "series_sf",
    "mixture_weights",
    "mixture_pdf",
    "power_series_power",
    "order_stat_pdf_direct",
    "order_stat_pdf_series",
    "order_stat_pdf_theta1",
    "order_stat_coefficients",
]

J_MAX = 500


def _regime(alpha):
    if alpha < 1:
        return "alpha_lt_1"
    if alpha > 1:
        return "alpha_gt_1"
    raise ArgumentError("alpha = 1 has no series expansion; it is a single exact term")


# log-coefficients ---------------------------------------------------------

def _log_negbin(nu, alpha, J):
    """log of alpha^nu (1-alpha)^p Gamma(p+nu) / (Gamma(nu) p!), p = 0..J."""
    p = np.arange(J + 1)
    return (
        nu * math.log(alpha) + p * math.log1p(-alpha)
        + gammaln(p + nu) - gammaln(nu) - gammaln(p + 1)
    )


def _log_a(theta, alpha, J):
    j = np.arange(J + 1)
    return (
        math.log(theta) + theta * math.log(alpha) + j * math.log1p(-alpha)
        + gammaln(j + theta + 1) - gammaln(theta + 1) - gammaln(j + 1)
    )


def _log_c(theta, alpha, J):
    j = np.arange(J + 1)
    c = 1.0 - 1.0 / alpha
    return (
        gammaln(j + theta + 1) - gammaln(theta + 1) - gammaln(j + 1)
        + j * math.log(c) - math.log(alpha)
    )


def _log_cprime(theta, alpha, J):
    j = np.arange(J + 1)
    c = 1.0 - 1.0 / alpha
    return gammaln(j + theta) - gammaln(theta) - gammaln(j + 1) + j * math.log(c)


@dataclass(frozen=True)
class CoefficientTable:
    """Truncated expansion coefficients for one (theta, alpha).

    For ``alpha_lt_1`` the fields ``aprime``, ``a_coef`` and ``b_coef`` are
    filled; for ``alpha_gt_1`` the fields ``c_coef`` and ``cprime``.
    ``b_coef[j, k]`` is zero above the diagonal.
    """

    regime: str
    J: int
    theta: float
    alpha: float
    aprime: np.ndarray | None = None
    a_coef: np.ndarray | None = None
    b_coef: np.ndarray | None = None
    c_coef: np.ndarray | None = None
    cprime: np.ndarray | None = None


def coeffs(theta, alpha, J) -> CoefficientTable:
    """Expansion coefficients up to order J.

    Parameters
    ----------
    theta, alpha : float
        Family parameters; ``alpha`` must differ from 1.
    J : int
        Truncation order.

    Notes
    -----
    ``A_j = theta alpha^theta (1-alpha)^j Gamma(j+theta+1) / (Gamma(theta+1) j!)``,
    ``A'_j = -A_j / (j + theta)`` (so ``sf = -sum_j A'_j S^(j+theta)``),
    ``B_jk = (-1)^(j-k) binom(j, k) A_j`` (the pdf series re-expanded in powers
    of F_Kw), ``C_j = Gamma(j+theta+1) c^j / (alpha Gamma(theta+1) j!)`` and
    ``C'_j = Gamma(j+theta) c^j / (Gamma(theta) j!)`` with ``c = 1 - 1/alpha``.
    """
    J = int(J)
    if J < 0:
        raise ArgumentError("J must be >= 0")
    regime = _regime(alpha)
    if regime == "alpha_lt_1":
        a_coef = np.exp(_log_a(theta, alpha, J))
        aprime = -a_coef / (np.arange(J + 1) + theta)
        j = np.arange(J + 1)[:, None]
        k = np.arange(J + 1)[None, :]
        with np.errstate(invalid="ignore"):
            log_binom = gammaln(j + 1) - gammaln(k + 1) - gammaln(np.maximum(j - k, 0) + 1)
        b_coef = np.where(k <= j, (-1.0) ** (j - k) * np.exp(log_binom) * a_coef[:, None], 0.0)
        return CoefficientTable(regime, J, theta, alpha, aprime=aprime, a_coef=a_coef, b_coef=b_coef)
    return CoefficientTable(
        regime, J, theta, alpha,
        c_coef=np.exp(_log_c(theta, alpha, J)),
        cprime=np.exp(_log_cprime(theta, alpha, J)),
    )


# evaluation helpers -------------------------------------------------------

def _kw_logs(baseline, a, t):
    """log g, log G and log(1 - G^a) at interior points."""
    with np.errstate(divide="ignore"):
        logg = baseline.logpdf(t)
        logG = baseline.logcdf(t)
        logA = _log1mexp(a * logG)
    return logg, logG, logA


def _log_fkw(a, b, logg, logG, logA):
    return math.log(a) + math.log(b) + logg + (a - 1) * logG + (b - 1) * logA


def _truncated_sum(logterms, tol, what):
    """Sum positive terms exp(logterms) row-wise, stopping at the first term
    below ``tol`` times the running sum; returns log of the partial sums."""
    logterms = np.atleast_2d(logterms)
    top = np.max(logterms, axis=1, keepdims=True)
    top = np.where(np.isfinite(top), top, 0.0)
    terms = np.exp(logterms - top)
    partial = np.cumsum(terms, axis=1)
    small = terms <= tol * partial
    small[:, 0] = False
    hit = small.any(axis=1)
    stop = np.argmax(small, axis=1)
    if not hit.all():
        row = int(np.argmin(hit))
        raise ConvergenceError(
            f"{what}: series did not reach tol={tol:g} within {logterms.shape[1]} terms",
            estimate=float(np.exp(np.log(partial[row, -1]) + top[row, 0])),
            terms=logterms.shape[1],
        )
    rows = np.arange(logterms.shape[0])
    with np.errstate(divide="ignore"):
        return np.log(partial[rows, stop]) + top[:, 0], stop + 1


def _prepare(spec, t):
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if not np.all(spec.baseline.in_support(t)):
        raise ArgumentError("series evaluation requires points interior to the support")
    return t


def _shape_out(vals, t):
    return float(vals[0]) if np.ndim(t) == 0 else vals


def series_pdf(spec, t, tol=1e-12):
    """Density from its series expansion, adaptively truncated."""
    theta, alpha, a, b = spec.family.as_tuple()
    tt = _prepare(spec, t)
    logg, logG, logA = _kw_logs(spec.baseline, a, tt)
    if alpha == 1:
        return _shape_out(np.exp(_log_fkw(a, b * theta, logg, logG, logA)), t)
    j = np.arange(J_MAX + 1)
    if alpha < 1:
        base = _log_fkw(a, b, logg, logG, logA)
        logS = b * logA
        logterms = _log_a(theta, alpha, J_MAX)[None, :] + (j + theta - 1)[None, :] * logS[:, None]
    else:
        base = _log_fkw(a, b * theta, logg, logG, logA)
        with np.errstate(divide="ignore"):
            logF = _log1mexp(b * logA)
        logterms = _log_c(theta, alpha, J_MAX)[None, :] + _pow(j, logF)
    logsum, _ = _truncated_sum(logterms, tol, "series_pdf")
    return _shape_out(np.exp(base + logsum), t)


def _pow(j, logx):
    """j * log x with 0 * (-inf) = 0."""
    with np.errstate(invalid="ignore"):
        out = j[None, :] * logx[:, None]
    out[:, 0] = 0.0
    return out


def series_sf(spec, t, tol=1e-12):
    """Survival function from its series expansion."""
    theta, alpha, a, b = spec.family.as_tuple()
    tt = _prepare(spec, t)
    _, logG, logA = _kw_logs(spec.baseline, a, tt)
    logS = b * logA
    if alpha == 1:
        return _shape_out(np.exp(theta * logS), t)
    j = np.arange(J_MAX + 1)
    if alpha < 1:
        logterms = _log_negbin(theta, alpha, J_MAX)[None, :] + (j + theta)[None, :] * logS[:, None]
        logsum, _ = _truncated_sum(logterms, tol, "series_sf")
        return _shape_out(np.exp(logsum), t)
    with np.errstate(divide="ignore"):
        logF = _log1mexp(logS)
    logterms = _log_cprime(theta, alpha, J_MAX)[None, :] + _pow(j, logF)
    logsum, _ = _truncated_sum(logterms, tol, "series_sf")
    return _shape_out(np.exp(theta * logS + logsum), t)


def mixture_weights(theta, alpha, J=J_MAX):
    """Negative-binomial weights w_j = A_j / (j + theta) of the Kw-G mixture."""
    if not 0 < alpha <= 1:
        raise ArgumentError("the mixture form needs 0 < alpha <= 1")
    if alpha == 1:
        w = np.zeros(J + 1)
        w[0] = 1.0
        return w
    return np.exp(_log_negbin(theta, alpha, J))


def mixture_pdf(spec, t, tol=1e-12):
    """Density as the mixture sum_j w_j f_Kw(t; a, b (j + theta))."""
    theta, alpha, a, b = spec.family.as_tuple()
    if not 0 < alpha <= 1:
        raise ArgumentError("the mixture form needs 0 < alpha <= 1")
    tt = _prepare(spec, t)
    logg, logG, logA = _kw_logs(spec.baseline, a, tt)
    if alpha == 1:
        return _shape_out(np.exp(_log_fkw(a, b * theta, logg, logG, logA)), t)
    j = np.arange(J_MAX + 1)
    bj = b * (j + theta)
    logw = _log_negbin(theta, alpha, J_MAX)
    logterms = (
        logw[None, :] + math.log(a) + np.log(bj)[None, :]
        + (logg + (a - 1) * logG)[:, None] + (bj - 1)[None, :] * logA[:, None]
    )
    logsum, _ = _truncated_sum(logterms, tol, "mixture_pdf")
    return _shape_out(np.exp(logsum), t)


def power_series_power(cprime, m, K):
    """Coefficients of (sum_k c_k x^k)^m up to degree K.

    Uses the recurrence
    ``d_0 = c_0^m``, ``d_k = (1/(k c_0)) sum_{h=1..k} (h (m + 1) - k) c_h d_{k-h}``.
    """
    c = np.asarray(cprime, dtype=float)
    m, K = int(m), int(K)
    if m < 0:
        raise ArgumentError("m must be a nonnegative integer")
    if c.size == 0 or c[0] == 0:
        raise ArgumentError("leading coefficient must be nonzero")
    c = np.concatenate([c, np.zeros(max(0, K + 1 - c.size))])
    d = np.zeros(K + 1)
    d[0] = c[0] ** m
    for k in range(1, K + 1):
        h = np.arange(1, k + 1)
        d[k] = np.sum((h * (m + 1) - k) * c[h] * d[k - h]) / (k * c[0])
    return d


# order statistics -------------------------------------------------------

def _check_rank(n, i):
    if int(n) != n or int(i) != i or not 1 <= i <= n:
        raise ArgumentError(f"rank i={i} must satisfy 1 <= i <= n={n}")
    return int(n), int(i)


def _log_rank_const(n, i):
    return gammaln(n + 1) - gammaln(i) - gammaln(n - i + 1)


def order_stat_pdf_direct(spec, n, i, t):
    """Density of the i-th order statistic of an n-sample."""
    n, i = _check_rank(n, i)
    tt = np.atleast_1d(np.asarray(t, dtype=float))
    with np.errstate(divide="ignore", invalid="ignore"):
        lsf = family.logsf(spec, tt)
        lcdf = _log1mexp(lsf)
        out = _log_rank_const(n, i) + family.logpdf(spec, tt)
        if i > 1:
            out = out + (i - 1) * lcdf
        if n > i:
            out = out + (n - i) * lsf
    return _shape_out(np.exp(out), t)


@dataclass(frozen=True)
class OrderStatCoefficients:
    """Per-l coefficient tables for the i-th order statistic of an n-sample.

    ``powers[l]`` is m = n - i + l; ``terms[l]`` holds the composed series
    coefficients of f * sf^m in the regime's basis (powers of S for
    alpha < 1, powers of F_Kw for alpha > 1); ``d[l]`` holds the power-series
    coefficients d_{m,k} (alpha > 1 only).
    """

    n: int
    i: int
    regime: str
    signs: np.ndarray
    powers: np.ndarray
    terms: list
    d: list | None


def _neg_binom_series(theta_m, alpha, J):
    """Coefficients of sf^m = sum_p w_p S^(p + theta m) for alpha < 1."""
    if theta_m == 0:
        w = np.zeros(J + 1)
        w[0] = 1.0
        return w
    return np.exp(_log_negbin(theta_m, alpha, J))


def order_stat_coefficients(spec, n, i, J=J_MAX) -> OrderStatCoefficients:
    theta, alpha = spec.family.theta, spec.family.alpha
    n, i = _check_rank(n, i)
    regime = _regime(alpha)
    ls = np.arange(i)
    log_binom = gammaln(i) - gammaln(ls + 1) - gammaln(i - ls)
    signs = (-1.0) ** ls * np.exp(log_binom + _log_rank_const(n, i))
    powers = n - i + ls
    terms, ds = [], []
    for m in powers:
        if regime == "alpha_lt_1":
            a_j = np.exp(_log_a(theta, alpha, J))
            w_p = _neg_binom_series(theta * m, alpha, J)
            terms.append(np.convolve(a_j, w_p)[: J + 1])
        else:
            c_j = np.exp(_log_c(theta, alpha, J))
            d = power_series_power(np.exp(_log_cprime(theta, alpha, J)), m, J)
            ds.append(d)
            terms.append(np.convolve(c_j, d)[: J + 1])
    return OrderStatCoefficients(n, i, regime, signs, powers, terms, ds or None)


def order_stat_pdf_series(spec, n, i, t, tol=1e-16):
    """Order-statistic density from per-l series expansions.

    The alternating sum over l = 0..i-1 stays explicit; each l-term
    f * sf^(n-i+l) is expanded and truncated separately. The l-terms cancel
    heavily in the lower tail (where cdf^(i-1) is tiny), so by default each
    series is summed to full double precision.
    """
    theta, alpha, a, b = spec.family.as_tuple()
    n, i = _check_rank(n, i)
    tt = _prepare(spec, t)
    if alpha == 1:
        return order_stat_pdf_direct(spec, n, i, t)
    table = order_stat_coefficients(spec, n, i)
    logg, logG, logA = _kw_logs(spec.baseline, a, tt)
    logS = b * logA
    j = np.arange(J_MAX + 1)
    total = np.zeros_like(tt)
    for sign, m, coef in zip(table.signs, table.powers, table.terms):
        with np.errstate(divide="ignore"):
            logc = np.log(coef)
        if table.regime == "alpha_lt_1":
            base = _log_fkw(a, b, logg, logG, logA)
            logterms = logc[None, :] + (j + theta * (m + 1) - 1)[None, :] * logS[:, None]
        else:
            base = _log_fkw(a, b * theta, logg, logG, logA) + theta * m * logS
            with np.errstate(divide="ignore"):
                logF = _log1mexp(logS)
            logterms = logc[None, :] + _pow(j, logF)
        logsum, _ = _truncated_sum(logterms, tol, "order_stat_pdf_series")
        total += sign * np.exp(base + logsum)
    return _shape_out(total, t)


def order_stat_pdf_theta1(spec, n, i, t, tol=1e-16, literal_eta=False):
    """Order-statistic density for theta = 1, alpha < 1, in the kappa/eta form.

    ``f_{i:n} = f_Kw(a, b) sum_l sign_l sum_{j,c} kappa_j eta^(m)_c S^(j + c + m)``
    with ``kappa_j = (j + 1) alpha (1 - alpha)^j`` and
    ``eta^(m)_c = alpha^m binom(c + m - 1, c) (1 - alpha)^c``, m = n - i + l.
    With ``literal_eta`` the m = 1 weights ``alpha (1 - alpha)^c`` are used for
    every l, which is exact only when every m equals 1 (n = 2, i = 1).
    """
    theta, alpha, a, b = spec.family.as_tuple()
    if theta != 1 or not alpha < 1:
        raise ArgumentError("the kappa/eta form needs theta = 1 and alpha < 1")
    n, i = _check_rank(n, i)
    tt = _prepare(spec, t)
    logg, logG, logA = _kw_logs(spec.baseline, a, tt)
    logS = b * logA
    J = J_MAX
    jj = np.arange(J + 1)
    kappa = (jj + 1) * alpha * (1 - alpha) ** jj
    ls = np.arange(i)
    signs = (-1.0) ** ls * np.exp(
        gammaln(i) - gammaln(ls + 1) - gammaln(i - ls) + _log_rank_const(n, i)
    )
    base = _log_fkw(a, b, logg, logG, logA)
    total = np.zeros_like(tt)
    for sign, m in zip(signs, n - i + ls):
        if literal_eta:
            eta = alpha * (1 - alpha) ** jj
        else:
            eta = _neg_binom_series(float(m), alpha, J)
        coef = np.convolve(kappa, eta)[: J + 1]
        with np.errstate(divide="ignore"):
            logterms = np.log(coef)[None, :] + (jj + m)[None, :] * logS[:, None]
        logsum, _ = _truncated_sum(logterms, tol, "order_stat_pdf_theta1")
        total += sign * np.exp(base + logsum)
    return _shape_out(total, t)
