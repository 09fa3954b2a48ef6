"""Shape of the density and hazard: derivatives, critical points, asymptotes
and the likelihood-ratio ordering in alpha."""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from . import family
from .errors import ArgumentError, DomainError

__all__ = [
    "CriticalPoint",
    "AsymptoteReport",
    "OrderingVerdict",
    "dlog_pdf",
    "dlog_hrf",
    "d2log_pdf",
    "d2log_hrf",
    "critical_points",
    "asymptote",
    "check_lr_order",
]


class _Rates(NamedTuple):
    psi: np.ndarray  # g'/g
    r1: np.ndarray  # g / G
    u2: np.ndarray  # g G^(a-1) / A
    u3: np.ndarray  # (1-alpha) a b g G^(a-1) A^(b-1) / D


def _rates(spec, t):
    t = np.asarray(t, dtype=float)
    lo, hi = spec.baseline.support
    if np.any((t <= lo) | (t >= hi)):
        raise DomainError("shape derivatives need points interior to the support")
    theta, alpha, a, b = spec.family.as_tuple()
    p = family._parts(spec, t)
    base = spec.baseline
    psi = base.dlogpdf(t)
    r1 = np.exp(p.logg - p.logG)
    core = p.logg + (a - 1) * p.logG
    u2 = np.exp(core - p.logA)
    abar = 1.0 - alpha
    u3 = abar * a * b * np.exp(core + (b - 1) * p.logA - p.logD)
    return _Rates(psi, r1, u2, u3)


def dlog_pdf(spec, t):
    """d/dt log f(t)."""
    theta, alpha, a, b = spec.family.as_tuple()
    r = _rates(spec, t)
    out = r.psi + (a - 1) * r.r1 - a * (b * theta - 1) * r.u2 - (theta + 1) * r.u3
    return float(out) if np.ndim(t) == 0 else out


def dlog_hrf(spec, t):
    """d/dt log h(t)."""
    theta, alpha, a, b = spec.family.as_tuple()
    r = _rates(spec, t)
    out = r.psi + (a - 1) * r.r1 + a * r.u2 - r.u3
    return float(out) if np.ndim(t) == 0 else out


def _second(spec, t):
    theta, alpha, a, b = spec.family.as_tuple()
    r = _rates(spec, t)
    dpsi = spec.baseline.d2logpdf(t)
    dr1 = r.r1 * (r.psi - r.r1)
    du2 = r.u2 * (r.psi + (a - 1) * r.r1 + a * r.u2)
    du3 = r.u3 * (r.psi + (a - 1) * r.r1 - (b - 1) * a * r.u2 - r.u3)
    return dpsi, dr1, du2, du3


def d2log_pdf(spec, t):
    """Analytic d^2/dt^2 log f; needs a baseline with an analytic d2logpdf
    (exponential and Weibull)."""
    theta, alpha, a, b = spec.family.as_tuple()
    dpsi, dr1, du2, du3 = _second(spec, t)
    out = dpsi + (a - 1) * dr1 - a * (b * theta - 1) * du2 - (theta + 1) * du3
    return float(out) if np.ndim(t) == 0 else out


def d2log_hrf(spec, t):
    """Analytic d^2/dt^2 log h; same baseline requirement as :func:`d2log_pdf`."""
    theta, alpha, a, b = spec.family.as_tuple()
    dpsi, dr1, du2, du3 = _second(spec, t)
    out = dpsi + (a - 1) * dr1 + a * du2 - du3
    return float(out) if np.ndim(t) == 0 else out


@dataclass(frozen=True)
class CriticalPoint:
    location: float
    kind: str  # "maximum", "minimum" or "inflexion"
    discriminant: float


def _numeric_slope(fun, t):
    h = 1e-5 * t
    return (fun(t + h) - fun(t - h)) / (2 * h)


def critical_points(spec, mode="density", n_grid=2048, p_range=(1e-6, 1 - 1e-6), flat_tol=1e-9):
    """Stationary points of log f (``mode="density"``) or log h (``"hazard"``).

    Sign changes of the first derivative are scanned on a log-spaced grid
    between two extreme quantiles and polished with Brent's method; each root
    is classified by a central-difference second derivative.
    """
    if mode not in ("density", "hazard"):
        raise ArgumentError("mode must be 'density' or 'hazard'")
    d1 = dlog_pdf if mode == "density" else dlog_hrf
    lo, hi = family.quantile(spec, np.array(p_range))
    lo = max(lo, np.nextafter(spec.baseline.support[0], np.inf))
    grid = np.geomspace(lo, hi, n_grid)
    with np.errstate(all="ignore"):
        vals = d1(spec, grid)
    out = []
    for k in np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0):
        if not (np.isfinite(vals[k]) and np.isfinite(vals[k + 1])):
            continue
        root = brentq(lambda x: d1(spec, x), grid[k], grid[k + 1], xtol=1e-15, rtol=8.9e-16, maxiter=200)
        disc = float(_numeric_slope(lambda x: d1(spec, x), root))
        scale = max(1.0, abs(vals[k]), abs(vals[k + 1]))
        if abs(disc) <= flat_tol * scale:
            kind = "inflexion"
        else:
            kind = "maximum" if disc < 0 else "minimum"
        out.append(CriticalPoint(float(root), kind, disc))
    return out


@dataclass(frozen=True)
class AsymptoteReport:
    endpoint: str
    quantity: str
    leading_form: Callable = field(repr=False)
    probe: float
    ratio_at_probe: float


def _leading(spec, endpoint, quantity):
    theta, alpha, a, b = spec.family.as_tuple()

    def parts(t):
        p = family._parts(spec, np.atleast_1d(t))
        return p.logg, p.logG, p.logA

    if endpoint == "lower":
        if quantity not in ("pdf", "hrf"):
            raise ArgumentError("lower-end leading forms exist for pdf and hrf")

        def form(t):
            logg, logG, _ = parts(t)
            return np.exp(math.log(theta * a * b / alpha) + logg + (a - 1) * logG)

        return form
    if quantity == "pdf":
        def form(t):
            logg, _, logA = parts(t)
            return np.exp(math.log(theta * a * b) + theta * math.log(alpha) + logg + (b * theta - 1) * logA)
    elif quantity == "sf":
        def form(t):
            _, _, logA = parts(t)
            return np.exp(theta * math.log(alpha) + b * theta * logA)
    elif quantity == "hrf":
        def form(t):
            logg, logG, logA = parts(t)
            return np.exp(math.log(theta * a * b) + logg + (a - 1) * logG - logA)
    else:
        raise ArgumentError("quantity must be pdf, sf or hrf")
    return form


def asymptote(spec, endpoint, quantity="pdf", probe=None) -> AsymptoteReport:
    """Leading-order form at a support endpoint and its ratio to the exact value.

    Lower end: ``f ~ h ~ theta a b g G^(a-1) / alpha``. Upper end:
    ``f ~ theta alpha^theta a b g (1-G^a)^(b theta - 1)``,
    ``sf ~ alpha^theta (1-G^a)^(b theta)`` and
    ``h ~ theta a b g G^(a-1) / (1-G^a)``. The default probe is the 1e-6
    quantile (lower) or the 1 - 1e-8 quantile (upper).
    """
    if endpoint not in ("lower", "upper"):
        raise ArgumentError("endpoint must be 'lower' or 'upper'")
    form = _leading(spec, endpoint, quantity)
    if probe is None:
        probe = family.quantile(spec, 1e-6) if endpoint == "lower" else family.isf(spec, 1e-8)
    exact = {"pdf": family.pdf, "sf": family.sf, "hrf": family.hrf}[quantity]
    ratio = float(exact(spec, np.array([probe]))[0] / form(probe)[0])
    return AsymptoteReport(endpoint, quantity, form, float(probe), ratio)


@dataclass(frozen=True)
class OrderingVerdict:
    """Grid verification of the likelihood-ratio ordering in alpha.

    With alpha1 < alpha2: ``lr`` (pdf1/pdf2 nonincreasing), ``sf``
    (sf1 <= sf2), ``hrf`` (hrf1 >= hrf2) and ``rhrf`` (rhrf1 <= rhrf2).
    ``conclusive`` is False when the specs differ in anything but alpha.
    """

    conclusive: bool
    properties: dict
    worst: dict

    @property
    def ok(self):
        return self.conclusive and all(self.properties.values())


def check_lr_order(spec1, spec2, grid_size=2000, slack=1e-12) -> OrderingVerdict:
    f1, f2 = spec1.family, spec2.family
    same = (
        f1.theta == f2.theta and f1.a == f2.a and f1.b == f2.b
        and spec1.baseline == spec2.baseline
    )
    if not same:
        return OrderingVerdict(False, {}, {})
    if f1.alpha > f2.alpha:
        spec1, spec2 = spec2, spec1
    ps = np.array([1e-6, 1 - 1e-6])
    q1, q2 = family.quantile(spec1, ps), family.quantile(spec2, ps)
    grid = np.geomspace(min(q1[0], q2[0]), max(q1[1], q2[1]), grid_size)
    grid = grid[spec1.baseline.in_support(grid)]
    lp1, lp2 = family.logpdf(spec1, grid), family.logpdf(spec2, grid)
    ls1, ls2 = family.logsf(spec1, grid), family.logsf(spec2, grid)
    lc1, lc2 = family.logcdf(spec1, grid), family.logcdf(spec2, grid)
    ratio = lp1 - lp2
    tol = slack * (1 + np.abs(ratio))
    steps = np.diff(ratio)
    gaps = {
        "lr": float(np.max(steps - tol[1:])),
        "sf": float(np.max(ls1 - ls2 - slack * (1 + np.abs(ls2)))),
        # log hrf = log pdf - log sf, log rhrf = log pdf - log cdf
        "hrf": float(np.max((lp2 - ls2) - (lp1 - ls1) - slack * (1 + np.abs(lp1 - ls1)))),
        "rhrf": float(np.max((lp1 - lc1) - (lp2 - lc2) - slack * (1 + np.abs(lp2 - lc2)))),
    }
    return OrderingVerdict(True, {k: v <= 0 for k, v in gaps.items()}, gaps)
