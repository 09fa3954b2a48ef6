"""Baseline distributions G(t) plugged into the generator family.

Every baseline exposes the same evaluation contract: log-density, log-cdf and
log-survival (all the family code works in log space), inverse cdf from either
tail, the derivative of ``log g`` in ``t`` (for shape analysis), and gradients
of ``log g`` / ``log G`` with respect to its own parameters (for the score).

Closed forms are used wherever they exist; the modified Weibull and the
user-hooked extended Weibull fall back on bracketed bisection for inversion.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, fields, replace
from typing import ClassVar, NamedTuple

import numpy as np

from .errors import ArgumentError, DomainError, ParameterError

__all__ = [
    "Baseline",
    "Verdict",
    "Exponential",
    "Lomax",
    "Weibull",
    "Frechet",
    "Gompertz",
    "ModifiedWeibull",
    "ExponentiatedPareto",
    "Power",
    "GurvichHook",
    "ExtendedWeibull",
    "modified_weibull_hook",
    "BASELINES",
    "make_baseline",
    "eval_baseline",
    "invert_baseline",
    "validate_params",
]

_EPS = np.finfo(float).eps


class Verdict(NamedTuple):
    ok: bool
    message: str = ""

    def __bool__(self):
        return self.ok


def _log1mexp(x):
    """log(1 - exp(x)) for x <= 0, accurate at both ends."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(x > -math.log(2), np.log(-np.expm1(x)), np.log1p(-np.exp(x)))


def _bisect_increasing(fun, target, lo, hi, upper_bounded):
    """Solve fun(t) = target for increasing ``fun`` on arrays of targets.

    ``hi`` is doubled until it brackets the target (unless the support is
    bounded above), then the bracket is bisected down to machine precision.
    Midpoints are geometric while the bracket spans more than a factor of 4,
    which keeps the iteration count bounded for targets near the lower end.
    """
    target = np.asarray(target, dtype=float)
    lo = np.full(target.shape, float(lo))
    hi = np.full(target.shape, float(hi))
    if not upper_bounded:
        for _ in range(2100):
            grow = fun(hi) < target
            if not grow.any():
                break
            hi = np.where(grow, hi * 2.0, hi)
    for _ in range(2200):
        geometric = (lo > 0) & (hi > 4.0 * lo)
        half = lo == 0
        mid = np.where(geometric, np.sqrt(lo * hi), 0.5 * (lo + hi))
        mid = np.where(half & (hi > 1e-300), hi * 1e-3, mid)
        if np.all((mid <= lo) | (mid >= hi)):
            break
        below = fun(mid) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


# symbols used in validation messages
_SYMBOL = {"lam": "λ", "beta": "β", "delta": "δ", "sigma": "σ", "gamma": "γ"}


def _cdf_grad_from_sf(logsf, logcdf, grad_logsf):
    """d log G from d log(1 - G), since dG = -d(1 - G)."""
    return -np.exp(logsf - logcdf) * grad_logsf


@dataclass(frozen=True)
class Baseline:
    """Common contract for all baselines.

    Subclasses declare their parameters as dataclass fields and implement
    ``_logpdf``, ``_logcdf``, ``_logsf`` and ``_dlogpdf``; everything else has
    a generic implementation that subclasses may override with closed forms.
    """

    kind: ClassVar[str] = "baseline"

    @property
    def param_names(self) -> tuple[str, ...]:
        return tuple(f.name for f in fields(self))

    @property
    def params(self) -> tuple[float, ...]:
        return tuple(float(getattr(self, name)) for name in self.param_names)

    @property
    def n_params(self) -> int:
        return len(self.param_names)

    @property
    def support(self) -> tuple[float, float]:
        return 0.0, math.inf

    def with_params(self, values) -> "Baseline":
        return replace(self, **dict(zip(self.param_names, map(float, values))))

    # -- validation -------------------------------------------------------
    def check(self) -> Verdict:
        for name, value in zip(self.param_names, self.params):
            if not math.isfinite(value) or value <= 0:
                return Verdict(False, f"{_SYMBOL.get(name, name)} must be > 0")
        return Verdict(True)

    def require_valid(self):
        verdict = self.check()
        if not verdict:
            raise ParameterError(f"{self.kind}: {verdict.message}")

    def in_support(self, t):
        lo, hi = self.support
        t = np.asarray(t, dtype=float)
        return (t > lo) & (t < hi)

    # -- evaluation -------------------------------------------------------
    def logpdf(self, t):
        return self._logpdf(np.asarray(t, dtype=float))

    def logcdf(self, t):
        return self._logcdf(np.asarray(t, dtype=float))

    def logsf(self, t):
        return self._logsf(np.asarray(t, dtype=float))

    def pdf(self, t):
        return np.exp(self.logpdf(t))

    def cdf(self, t):
        return np.exp(self.logcdf(t))

    def sf(self, t):
        return np.exp(self.logsf(t))

    def dlogpdf(self, t):
        """d/dt log g(t)."""
        return self._dlogpdf(np.asarray(t, dtype=float))

    def d2logpdf(self, t):
        """d²/dt² log g(t); only some baselines ship it analytically."""
        raise NotImplementedError(f"{self.kind} has no analytic second derivative")

    # -- inversion --------------------------------------------------------
    def ppf(self, u):
        """Inverse cdf, G^{-1}(u), accurate for small ``u``."""
        u = np.asarray(u, dtype=float)
        with np.errstate(divide="ignore"):
            return self._solve(lambda t: self._logcdf(t), np.log(u), lower_tail=True)

    def isf(self, v):
        """Inverse survival function, G^{-1}(1 - v), accurate for small ``v``."""
        v = np.asarray(v, dtype=float)
        with np.errstate(divide="ignore"):
            return self._solve(lambda t: -self._logsf(t), -np.log(v), lower_tail=False)

    def from_unit(self, u, uc):
        """G^{-1} at u given both u and uc = 1 - u; each tail uses the accurate side."""
        u = np.asarray(u, dtype=float)
        uc = np.asarray(uc, dtype=float)
        out = np.empty(np.broadcast(u, uc).shape)
        low = u < 0.5
        if low.any():
            out[low] = self.ppf(u[low])
        if (~low).any():
            out[~low] = self.isf(uc[~low])
        return out

    def _solve(self, fun, target, lower_tail):
        lo, hi = self.support
        bounded = math.isfinite(hi)
        start = hi if bounded else max(1.0, 2.0 * lo)
        flat = np.atleast_1d(target).astype(float)
        out = np.empty_like(flat)
        at_lo = flat == (-np.inf if lower_tail else 0.0)
        at_hi = flat == (0.0 if lower_tail else np.inf)
        mid = ~(at_lo | at_hi)
        out[at_lo] = lo
        out[at_hi] = hi
        if mid.any():

            def safe(t):
                with np.errstate(divide="ignore", invalid="ignore"):
                    val = fun(np.clip(t, np.nextafter(lo, hi), None))
                return np.where(t <= lo, -np.inf, val)

            out[mid] = _bisect_increasing(safe, flat[mid], lo, start, bounded)
        return out.reshape(np.shape(target)) if np.ndim(target) else out[0]

    # -- parameter gradients ---------------------------------------------
    def grad_logpdf(self, t):
        """Gradient of log g(t) w.r.t. the baseline parameters, shape (k, n)."""
        return self._fd_grad(self._logpdf, t)

    def grad_logcdf(self, t):
        """Gradient of log G(t) w.r.t. the baseline parameters, shape (k, n)."""
        return self._fd_grad(self._logcdf, t)

    def _fd_grad(self, method_name_or_fn, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        name = method_name_or_fn.__name__
        params = np.array(self.params)
        out = np.empty((params.size, t.size))
        for j in range(params.size):
            h = _EPS ** (1 / 3) * max(1.0, abs(params[j]))
            up, dn = params.copy(), params.copy()
            up[j] += h
            dn[j] -= h
            f_up = getattr(self.with_params(up), name)(t)
            f_dn = getattr(self.with_params(dn), name)(t)
            out[j] = (f_up - f_dn) / (2 * h)
        return out

    def __str__(self):
        args = ", ".join(f"{n}={v:g}" for n, v in zip(self.param_names, self.params))
        return f"{self.kind}({args})"


@dataclass(frozen=True)
class Exponential(Baseline):
    lam: float = 1.0
    kind: ClassVar[str] = "exponential"

    def _logpdf(self, t):
        return math.log(self.lam) - self.lam * t

    def _logcdf(self, t):
        return _log1mexp(-self.lam * t)

    def _logsf(self, t):
        return -self.lam * t

    def _dlogpdf(self, t):
        return np.full_like(t, -self.lam)

    def d2logpdf(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))

    def ppf(self, u):
        return -np.log1p(-np.asarray(u, dtype=float)) / self.lam

    def isf(self, v):
        with np.errstate(divide="ignore"):
            return -np.log(np.asarray(v, dtype=float)) / self.lam

    def grad_logpdf(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return (1.0 / self.lam - t)[None, :]

    def grad_logcdf(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return (t / np.expm1(self.lam * t))[None, :]


@dataclass(frozen=True)
class Lomax(Baseline):
    beta: float = 1.0
    delta: float = 1.0
    kind: ClassVar[str] = "lomax"

    def _logpdf(self, t):
        return math.log(self.beta) - math.log(self.delta) - (self.beta + 1) * np.log1p(t / self.delta)

    def _logcdf(self, t):
        return _log1mexp(self._logsf(t))

    def _logsf(self, t):
        return -self.beta * np.log1p(t / self.delta)

    def _dlogpdf(self, t):
        return -(self.beta + 1) / (self.delta + t)

    def ppf(self, u):
        return self.delta * np.expm1(-np.log1p(-np.asarray(u, dtype=float)) / self.beta)

    def isf(self, v):
        with np.errstate(divide="ignore"):
            return self.delta * np.expm1(-np.log(np.asarray(v, dtype=float)) / self.beta)

    def _grad_logsf(self, t):
        return np.vstack([-np.log1p(t / self.delta), self.beta * t / (self.delta * (self.delta + t))])

    def grad_logpdf(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        d = self.delta
        return np.vstack([
            1 / self.beta - np.log1p(t / d),
            -1 / d + (self.beta + 1) * t / (d * (d + t)),
        ])

    def grad_logcdf(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return _cdf_grad_from_sf(self._logsf(t), self._logcdf(t), self._grad_logsf(t))


@dataclass(frozen=True)
class Weibull(Baseline):
    """G(t) = 1 - exp(-lam * t**beta)."""

    lam: float = 1.0
    beta: float = 1.0
    kind: ClassVar[str] = "weibull"

    def _logpdf(self, t):
        with np.errstate(divide="ignore"):
            return (
                math.log(self.lam) + math.log(self.beta)
                + (self.beta - 1) * np.log(t)
                - self.lam * t**self.beta
            )

    def _logcdf(self, t):
        return _log1mexp(-self.lam * t**self.beta)

    def _logsf(self, t):
        return -self.lam * t**self.beta

    def _dlogpdf(self, t):
        return (self.beta - 1) / t - self.lam * self.beta * t ** (self.beta - 1)

    def d2logpdf(self, t):
        t = np.asarray(t, dtype=float)
        b = self.beta
        return -(b - 1) / t**2 - self.lam * b * (b - 1) * t ** (b - 2)

    def ppf(self, u):
        return (-np.log1p(-np.asarray(u, dtype=float)) / self.lam) ** (1 / self.beta)

    def isf(self, v):
        with np.errstate(divide="ignore"):
            return (-np.log(np.asarray(v, dtype=float)) / self.lam) ** (1 / self.beta)

    def grad_logpdf(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        tb = t**self.beta
        logt = np.log(t)
        return np.vstack(
            [1 / self.lam - tb, 1 / self.beta + logt - self.lam * tb * logt]
        )

    def grad_logcdf(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        tb = t**self.beta
        ratio = tb / np.expm1(self.lam * tb)
        return np.vstack([ratio, self.lam * ratio * np.log(t)])


@dataclass(frozen=True)
class Frechet(Baseline):
    """G(t) = exp(-(delta/t)**lam)."""

    lam: float = 1.0
    delta: float = 1.0
    kind: ClassVar[str] = "frechet"

    def _logpdf(self, t):
        lam, d = self.lam, self.delta
        return math.log(lam) + lam * math.log(d) - (lam + 1) * np.log(t) - (d / t) ** lam

    def _logcdf(self, t):
        return -((self.delta / t) ** self.lam)

    def _logsf(self, t):
        return _log1mexp(self._logcdf(t))

    def _dlogpdf(self, t):
        lam = self.lam
        return -(lam + 1) / t + lam * (self.delta / t) ** lam / t

    def ppf(self, u):
        with np.errstate(divide="ignore"):
            return self.delta * (-np.log(np.asarray(u, dtype=float))) ** (-1 / self.lam)

    def isf(self, v):
        with np.errstate(divide="ignore"):
            return self.delta * (-np.log1p(-np.asarray(v, dtype=float))) ** (-1 / self.lam)

    def grad_logpdf(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        lam, d = self.lam, self.delta
        z = (d / t) ** lam
        return np.vstack([1 / lam + np.log(d / t) * (1 - z), lam / d * (1 - z)])

    def grad_logcdf(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        lam, d = self.lam, self.delta
        z = (d / t) ** lam
        return np.vstack([-z * np.log(d / t), -lam * z / d])


@dataclass(frozen=True)
class Gompertz(Baseline):
    """G(t) = 1 - exp(-(beta/lam) * (exp(lam t) - 1))."""

    beta: float = 1.0
    lam: float = 1.0
    kind: ClassVar[str] = "gompertz"

    def _logpdf(self, t):
        return math.log(self.beta) + self.lam * t + self._logsf(t)

    def _logcdf(self, t):
        return _log1mexp(self._logsf(t))

    def _logsf(self, t):
        return -(self.beta / self.lam) * np.expm1(self.lam * t)

    def _dlogpdf(self, t):
        return self.lam - self.beta * np.exp(self.lam * t)

    def ppf(self, u):
        u = np.asarray(u, dtype=float)
        return np.log1p(-self.lam * np.log1p(-u) / self.beta) / self.lam

    def isf(self, v):
        with np.errstate(divide="ignore"):
            v = np.asarray(v, dtype=float)
            return np.log1p(-self.lam * np.log(v) / self.beta) / self.lam

    def _grad_logsf(self, t):
        b, lam = self.beta, self.lam
        em = np.expm1(lam * t)
        return np.vstack([-em / lam, b * em / lam**2 - b * t * np.exp(lam * t) / lam])

    def grad_logpdf(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return self._grad_logsf(t) + np.vstack([np.full_like(t, 1 / self.beta), t])

    def grad_logcdf(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return _cdf_grad_from_sf(self._logsf(t), self._logcdf(t), self._grad_logsf(t))


@dataclass(frozen=True)
class ModifiedWeibull(Baseline):
    """G(t) = 1 - exp(-sigma t - beta t**gamma); sigma, beta >= 0, sigma + beta > 0."""

    sigma: float = 1.0
    beta: float = 1.0
    gamma: float = 1.0
    kind: ClassVar[str] = "modified-weibull"

    def check(self) -> Verdict:
        s, b, g = self.params
        if not all(map(math.isfinite, (s, b, g))):
            return Verdict(False, "parameters must be finite")
        if s < 0:
            return Verdict(False, "σ must be >= 0")
        if b < 0:
            return Verdict(False, "β must be >= 0")
        if s + b <= 0:
            return Verdict(False, "σ+β must be > 0")
        if g <= 0:
            return Verdict(False, "γ must be > 0")
        return Verdict(True)

    def _hazard(self, t):
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.sigma + self.beta * self.gamma * t ** (self.gamma - 1)

    def _logpdf(self, t):
        with np.errstate(divide="ignore"):
            return np.log(self._hazard(t)) + self._logsf(t)

    def _logcdf(self, t):
        return _log1mexp(self._logsf(t))

    def _logsf(self, t):
        return -self.sigma * t - self.beta * t**self.gamma

    def _dlogpdf(self, t):
        g = self.gamma
        dh = self.beta * g * (g - 1) * t ** (g - 2)
        return dh / self._hazard(t) - self._hazard(t)

    def _grad_logsf(self, t):
        tg = t**self.gamma
        return np.vstack([-t, -tg, -self.beta * tg * np.log(t)])

    def grad_logpdf(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        g = self.gamma
        h = self._hazard(t)
        tg1 = t ** (g - 1)
        dlogh = np.vstack([1 / h, g * tg1 / h, self.beta * tg1 * (1 + g * np.log(t)) / h])
        return dlogh + self._grad_logsf(t)

    def grad_logcdf(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return _cdf_grad_from_sf(self._logsf(t), self._logcdf(t), self._grad_logsf(t))


@dataclass(frozen=True)
class ExponentiatedPareto(Baseline):
    """G(t) = (1 - (scale/t)**k)**gamma on t > scale."""

    gamma: float = 1.0
    k: float = 1.0
    scale: float = 1.0
    kind: ClassVar[str] = "exp-pareto"

    @property
    def support(self):
        return self.scale, math.inf

    def _logpdf(self, t):
        g, k, s = self.gamma, self.k, self.scale
        with np.errstate(divide="ignore"):
            return (
                math.log(g) + math.log(k) + k * math.log(s) - (k + 1) * np.log(t)
                + (g - 1) * np.log1p(-((s / t) ** k))
            )

    def _logcdf(self, t):
        with np.errstate(divide="ignore"):
            return self.gamma * np.log1p(-((self.scale / t) ** self.k))

    def _logsf(self, t):
        return _log1mexp(self._logcdf(t))

    def _dlogpdf(self, t):
        g, k, s = self.gamma, self.k, self.scale
        r = (s / t) ** k
        return -(k + 1) / t + (g - 1) * k * r / (t * (1 - r))

    def ppf(self, u):
        with np.errstate(divide="ignore"):
            w = -np.expm1(np.log(np.asarray(u, dtype=float)) / self.gamma)
            return self.scale * w ** (-1 / self.k)

    def isf(self, v):
        w = -np.expm1(np.log1p(-np.asarray(v, dtype=float)) / self.gamma)
        with np.errstate(divide="ignore"):
            return self.scale * w ** (-1 / self.k)

    def grad_logpdf(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        g, k, s = self.gamma, self.k, self.scale
        ls = np.log(s / t)
        r = np.exp(k * ls)
        q = r / -np.expm1(k * ls)  # r / (1 - r)
        return np.vstack([
            1 / g + np.log1p(-r),
            1 / k + ls - (g - 1) * q * ls,
            k / s - (g - 1) * k * q / s,
        ])

    def grad_logcdf(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        g, k, s = self.gamma, self.k, self.scale
        ls = np.log(s / t)
        r = np.exp(k * ls)
        q = r / -np.expm1(k * ls)
        return np.vstack([np.log1p(-r), -g * q * ls, -g * k * q / s])


@dataclass(frozen=True)
class Power(Baseline):
    """G(t) = (scale * t)**k on 0 < t < 1/scale."""

    k: float = 1.0
    scale: float = 1.0
    kind: ClassVar[str] = "power"

    @property
    def support(self):
        return 0.0, 1.0 / self.scale

    def _logpdf(self, t):
        with np.errstate(divide="ignore"):
            return math.log(self.k) + self.k * math.log(self.scale) + (self.k - 1) * np.log(t)

    def _logcdf(self, t):
        with np.errstate(divide="ignore"):
            return self.k * np.log(self.scale * t)

    def _logsf(self, t):
        return _log1mexp(self._logcdf(t))

    def _dlogpdf(self, t):
        return (self.k - 1) / t

    def cdf(self, t):
        # direct power: exact for the uniform case k = scale = 1
        return (self.scale * np.asarray(t, dtype=float)) ** self.k

    def ppf(self, u):
        return np.asarray(u, dtype=float) ** (1 / self.k) / self.scale

    def isf(self, v):
        return np.exp(np.log1p(-np.asarray(v, dtype=float)) / self.k) / self.scale

    def grad_logpdf(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return np.vstack([1 / self.k + np.log(self.scale * t), np.full_like(t, self.k / self.scale)])

    def grad_logcdf(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return np.vstack([np.log(self.scale * t), np.full_like(t, self.k / self.scale)])


@dataclass(frozen=True)
class GurvichHook:
    """User-supplied cumulative function of an extended-Weibull baseline.

    ``cumulative`` is E(t) (nonnegative, nondecreasing, E(lower) = 0),
    ``rate`` its derivative e(t) and ``delta`` the multiplier in
    G(t) = 1 - exp(-delta E(t)). ``rate_derivative`` (e'(t)) and ``inverse``
    (E^{-1}) are optional; numerical fallbacks are used without them.
    """

    cumulative: Callable
    rate: Callable
    delta: float = 1.0
    rate_derivative: Callable | None = None
    inverse: Callable | None = None
    support: tuple[float, float] = (0.0, math.inf)

    def check(self, grid=None) -> Verdict:
        if not (math.isfinite(self.delta) and self.delta > 0):
            return Verdict(False, "δ must be > 0")
        lo, hi = self.support
        if abs(float(self.cumulative(np.array([lo]))[0])) > 1e-12:
            return Verdict(False, "E(lower) must be 0")
        if grid is None:
            top = hi if math.isfinite(hi) else lo + 50.0
            grid = np.linspace(lo, top, 1001)[1:-1]
        e_vals = np.asarray(self.cumulative(grid))
        if np.any(np.diff(e_vals) < 0):
            return Verdict(False, "E must be nondecreasing")
        if np.any(np.asarray(self.rate(grid)) < 0):
            return Verdict(False, "e must be >= 0")
        return Verdict(True)


@dataclass(frozen=True)
class ExtendedWeibull(Baseline):
    """G(t) = 1 - exp(-delta E(t)) for a user-supplied hook."""

    hook: GurvichHook
    kind: ClassVar[str] = "extended-weibull"

    @property
    def param_names(self):
        return ("delta",)

    @property
    def params(self):
        return (float(self.hook.delta),)

    @property
    def support(self):
        return self.hook.support

    def with_params(self, values):
        (delta,) = values
        return ExtendedWeibull(replace(self.hook, delta=float(delta)))

    def check(self):
        return self.hook.check()

    def _logpdf(self, t):
        with np.errstate(divide="ignore"):
            return math.log(self.hook.delta) + np.log(self.hook.rate(t)) + self._logsf(t)

    def _logcdf(self, t):
        return _log1mexp(self._logsf(t))

    def _logsf(self, t):
        return -self.hook.delta * np.asarray(self.hook.cumulative(t), dtype=float)

    def _dlogpdf(self, t):
        e = np.asarray(self.hook.rate(t), dtype=float)
        if self.hook.rate_derivative is not None:
            de = np.asarray(self.hook.rate_derivative(t), dtype=float)
        else:
            h = _EPS ** (1 / 3) * np.maximum(1.0, np.abs(t))
            de = (np.asarray(self.hook.rate(t + h)) - np.asarray(self.hook.rate(t - h))) / (2 * h)
        return de / e - self.hook.delta * e

    def isf(self, v):
        if self.hook.inverse is None:
            return super().isf(v)
        with np.errstate(divide="ignore"):
            return self.hook.inverse(-np.log(np.asarray(v, dtype=float)) / self.hook.delta)

    def ppf(self, u):
        if self.hook.inverse is None:
            return super().ppf(u)
        u = np.asarray(u, dtype=float)
        return self.hook.inverse(-np.log1p(-u) / self.hook.delta)

    def __str__(self):
        return f"{self.kind}(delta={self.hook.delta:g})"


def modified_weibull_hook(sigma, beta, gamma, delta=1.0):
    """The modified Weibull expressed as an extended-Weibull hook.

    E(t) = (sigma t + beta t**gamma) / delta, so that delta E(t) is the
    modified-Weibull cumulative hazard for any choice of ``delta``.
    """

    def cumulative(t):
        t = np.asarray(t, dtype=float)
        return (sigma * t + beta * t**gamma) / delta

    def rate(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            return (sigma + beta * gamma * t ** (gamma - 1)) / delta

    def rate_derivative(t):
        t = np.asarray(t, dtype=float)
        return beta * gamma * (gamma - 1) * t ** (gamma - 2) / delta

    return GurvichHook(cumulative, rate, delta, rate_derivative)


BASELINES: dict[str, type[Baseline]] = {
    cls.kind: cls
    for cls in (
        Exponential, Lomax, Weibull, Frechet, Gompertz,
        ModifiedWeibull, ExponentiatedPareto, Power,
    )
}

_ALIASES = {
    "exp": "exponential", "e": "exponential", "l": "lomax", "w": "weibull",
    "fr": "frechet", "go": "gompertz", "mw": "modified-weibull",
    "modified_weibull": "modified-weibull", "ep": "exp-pareto",
    "exponentiated-pareto": "exp-pareto", "exp_pareto": "exp-pareto",
}


def make_baseline(kind: str, *params: float) -> Baseline:
    """Build a shipped baseline by name, e.g. ``make_baseline("weibull", 1, 2)``."""
    key = _ALIASES.get(kind.lower(), kind.lower())
    try:
        cls = BASELINES[key]
    except KeyError:
        raise ArgumentError(
            f"unknown baseline {kind!r}; choose from {', '.join(BASELINES)}"
        ) from None
    if params:
        return cls(*map(float, params))
    return cls()


def validate_params(model: Baseline) -> Verdict:
    """Accept or reject the parameters, naming the first violated constraint."""
    return model.check()


def eval_baseline(model: Baseline, t):
    """Return (g(t), G(t)); raises outside the support."""
    model.require_valid()
    t_arr = np.asarray(t, dtype=float)
    if not np.all(model.in_support(t_arr)):
        bad = t_arr[~model.in_support(t_arr)] if t_arr.ndim else t_arr
        raise DomainError(f"t={float(np.ravel(bad)[0])!r} outside support {model.support} of {model}")
    return model.pdf(t_arr), model.cdf(t_arr)


def invert_baseline(model: Baseline, p):
    """G^{-1}(p) for p in [0, 1); p = 0 returns the lower support bound."""
    model.require_valid()
    p_arr = np.asarray(p, dtype=float)
    if np.any((p_arr < 0) | (p_arr >= 1)) or np.any(np.isnan(p_arr)):
        raise ArgumentError("p must lie in [0, 1)")
    lo = model.support[0]
    out = np.where(p_arr == 0, lo, model.ppf(np.where(p_arr == 0, 0.5, p_arr)))
    return float(out) if out.ndim == 0 else out
