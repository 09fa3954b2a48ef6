"""The GMOKw-G family and its nested sub-families.

A GMOKw-G variable applies a generalised Marshall-Olkin tilt to a
Kumaraswamy-G distribution. With S(t) = (1 - G(t)^a)^b the Kw-G survival
function and D = 1 - (1 - alpha) S,

    sf(t)  = [alpha S / D]^theta
    pdf(t) = theta alpha^theta a b g G^(a-1) (1 - G^a)^(b theta - 1) / D^(theta + 1)

Fixing parameters at one recovers the sub-families:

=========  =====================
variant    fixed parameters
=========  =====================
GMOKwG     none
MOKwG      theta
KwG        theta, alpha
GMO        a, b
MO         theta, a, b
Baseline   theta, alpha, a, b
=========  =====================

All evaluators work in log space and only exponentiate at the end, since the
raw density under- or overflows for large ``b * theta``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import rng
from .baselines import Baseline, _log1mexp
from .errors import ArgumentError, DomainError, ParameterError

__all__ = [
    "Variant",
    "FamilyParams",
    "ModelSpec",
    "SampleBatch",
    "FAMILY_NAMES",
    "make_spec",
    "kw_spec",
    "logpdf",
    "pdf",
    "logcdf",
    "cdf",
    "logsf",
    "sf",
    "hrf",
    "rhrf",
    "chrf",
    "quantile",
    "isf",
    "quantile_pair",
    "sample",
    "simulate_genesis",
    "reduce",
]

FAMILY_NAMES = ("theta", "alpha", "a", "b")


class Variant(str, enum.Enum):
    GMOKWG = "GMOKwG"
    MOKWG = "MOKwG"
    KWG = "KwG"
    GMO = "GMO"
    MO = "MO"
    BASELINE = "Baseline"

    @property
    def fixed(self) -> tuple[str, ...]:
        return _FIXED[self]

    @property
    def free_family(self) -> tuple[str, ...]:
        return tuple(n for n in FAMILY_NAMES if n not in _FIXED[self])

    @classmethod
    def parse(cls, name) -> "Variant":
        if isinstance(name, cls):
            return name
        key = str(name).lower().replace("-", "").replace("_", "")
        if key in _SHORT:
            return _SHORT[key]
        for v in cls:
            if v.value.lower() == key or v.name.lower() == key:
                return v
        raise ArgumentError(
            f"unknown model {name!r}; choose from gmokw, mokw, kw, gmo, mo, baseline"
        )


_FIXED = {
    Variant.GMOKWG: (),
    Variant.MOKWG: ("theta",),
    Variant.KWG: ("theta", "alpha"),
    Variant.GMO: ("a", "b"),
    Variant.MO: ("theta", "a", "b"),
    Variant.BASELINE: FAMILY_NAMES,
}
# short CLI names
_SHORT = {"gmokw": Variant.GMOKWG, "mokw": Variant.MOKWG, "kw": Variant.KWG}


@dataclass(frozen=True)
class FamilyParams:
    theta: float = 1.0
    alpha: float = 1.0
    a: float = 1.0
    b: float = 1.0

    @property
    def alpha_bar(self) -> float:
        return 1.0 - self.alpha

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.theta, self.alpha, self.a, self.b)

    def check(self):
        for name, value in zip(FAMILY_NAMES, self.as_tuple()):
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be > 0")


@dataclass(frozen=True)
class ModelSpec:
    """A family variant bound to its parameters and baseline."""

    variant: Variant
    family: FamilyParams
    baseline: Baseline

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant.parse(self.variant))
        self.family.check()
        for name in self.variant.fixed:
            if getattr(self.family, name) != 1.0:
                raise ParameterError(
                    f"{self.variant.value} requires {name} = 1, got {getattr(self.family, name)!r}"
                )
        self.baseline.require_valid()

    # parameter-vector plumbing for inference
    @property
    def free_names(self) -> tuple[str, ...]:
        return self.variant.free_family + self.baseline.param_names

    @property
    def free_values(self) -> np.ndarray:
        fam = [getattr(self.family, n) for n in self.variant.free_family]
        return np.array(fam + list(self.baseline.params), dtype=float)

    @property
    def n_free(self) -> int:
        return len(self.free_names)

    def with_free(self, values) -> "ModelSpec":
        values = np.asarray(values, dtype=float)
        k = len(self.variant.free_family)
        fam = dict(zip(self.variant.free_family, values[:k]))
        return ModelSpec(
            self.variant,
            FamilyParams(**{**_ones(), **fam}),
            self.baseline.with_params(values[k:]),
        )

    def __str__(self):
        fam = ", ".join(f"{n}={getattr(self.family, n):g}" for n in self.variant.free_family)
        return f"{self.variant.value}({fam}; {self.baseline})"


def _ones():
    return dict.fromkeys(FAMILY_NAMES, 1.0)


def make_spec(baseline: Baseline, theta=1.0, alpha=1.0, a=1.0, b=1.0, variant=None) -> ModelSpec:
    """Build a spec; the variant defaults to the most specific consistent one."""
    fam = FamilyParams(float(theta), float(alpha), float(a), float(b))
    if variant is None:
        return reduce(ModelSpec(Variant.GMOKWG, fam, baseline))
    return ModelSpec(Variant.parse(variant), fam, baseline)


def kw_spec(baseline: Baseline, a, b) -> ModelSpec:
    """The Kw-G(a, b) distribution as a spec."""
    return ModelSpec(Variant.KWG, FamilyParams(1.0, 1.0, float(a), float(b)), baseline)


def reduce(spec: ModelSpec) -> ModelSpec:
    """Most specific variant consistent with parameters exactly equal to 1."""
    th, al, a, b = spec.family.as_tuple()
    if th == al == a == b == 1.0:
        v = Variant.BASELINE
    elif th == a == b == 1.0:
        v = Variant.MO
    elif th == al == 1.0:
        v = Variant.KWG
    elif th == 1.0:
        v = Variant.MOKWG
    elif a == b == 1.0:
        v = Variant.GMO
    else:
        return spec
    if v == spec.variant:
        return spec
    return ModelSpec(v, spec.family, spec.baseline)


class _Parts(NamedTuple):
    logg: np.ndarray
    logG: np.ndarray
    logA: np.ndarray  # log(1 - G^a)
    logD: np.ndarray  # log(1 - alpha_bar S)


def _log3(x, y, z):
    return math.log(x) + math.log(y) + math.log(z)


def _xlog(c, x):
    """c * x with the convention 0 * (-inf) = 0."""
    if c == 0:
        return np.zeros_like(x)
    return c * x


def _parts(spec: ModelSpec, t: np.ndarray) -> _Parts:
    base = spec.baseline
    theta, alpha, a, b = spec.family.as_tuple()
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        logg = base.logpdf(t)
        logG = base.logcdf(t)
        logA = _log1mexp(a * logG)
        # D = alpha + alpha_bar * (1 - S)
        fk = -np.expm1(b * logA)
        logD = math.log(alpha) + np.log1p((1.0 - alpha) * fk / alpha)
    return _Parts(logg, logG, logA, logD)


def _split(spec, t):
    t = np.asarray(t, dtype=float)
    if np.any(np.isnan(t)):
        raise DomainError("t must not be NaN")
    lo, hi = spec.baseline.support
    below = t <= lo
    above = t >= hi
    inside = ~(below | above)
    return t, below, above, inside


def _finish(out, t):
    return float(out) if np.ndim(t) == 0 else out


def _logpdf_inside(spec, t):
    theta, alpha, a, b = spec.family.as_tuple()
    p = _parts(spec, t)
    with np.errstate(invalid="ignore"):
        return (
            _log3(theta, a, b) + theta * math.log(alpha)
            + p.logg + _xlog(a - 1, p.logG) + _xlog(b * theta - 1, p.logA)
            - (theta + 1) * p.logD
        )


def _logsf_inside(spec, t):
    theta, alpha, a, b = spec.family.as_tuple()
    p = _parts(spec, t)
    return theta * (math.log(alpha) + b * p.logA - p.logD)


def logpdf(spec: ModelSpec, t):
    """Log density; -inf outside the support.

    At a finite lower support bound the density is returned as its limit,
    which is finite or infinite depending on the parameters.
    """
    t, below, above, inside = _split(spec, t)
    out = np.full(t.shape, -np.inf)
    lo = spec.baseline.support[0]
    at_lo = t == lo
    if inside.any():
        out[inside] = _logpdf_inside(spec, t[inside])
    if at_lo.any():
        out[at_lo] = _lower_limit_logpdf(spec)
    return _finish(out, t)


def _lower_limit_logpdf(spec):
    # probe just above the bound and read off the limit where it is finite
    lo = spec.baseline.support[0]
    with np.errstate(all="ignore"):
        vals = [_logpdf_inside(spec, np.array([lo + h]))[0] for h in (1e-300, 1e-200)]
    if abs(vals[0] - vals[1]) < 1e-10:
        return vals[0]
    return np.inf if vals[0] > vals[1] else -np.inf


def pdf(spec: ModelSpec, t):
    return np.exp(logpdf(spec, t))


def logsf(spec: ModelSpec, t):
    t, below, above, inside = _split(spec, t)
    out = np.where(below, 0.0, -np.inf)
    if inside.any():
        out[inside] = _logsf_inside(spec, t[inside])
    return _finish(out, t)


def sf(spec: ModelSpec, t):
    return np.exp(logsf(spec, t))


def logcdf(spec: ModelSpec, t):
    return _log1mexp(logsf(spec, t))


def cdf(spec: ModelSpec, t):
    return -np.expm1(logsf(spec, t))


def chrf(spec: ModelSpec, t):
    """Cumulative hazard, -log sf."""
    return -logsf(spec, t)


def _interior(spec, t, what):
    t, below, above, inside = _split(spec, t)
    if not inside.all():
        bad = np.ravel(t[~inside])[0]
        raise DomainError(f"{what} undefined at t={float(bad)!r}: not interior to {spec.baseline.support}")
    return t


def hrf(spec: ModelSpec, t):
    """Hazard rate theta a b g G^(a-1) / ((1 - G^a) D)."""
    t = _interior(spec, t, "hrf")
    theta, alpha, a, b = spec.family.as_tuple()
    p = _parts(spec, t)
    out = np.exp(
        _log3(theta, a, b) + p.logg + _xlog(a - 1, p.logG) - p.logA - p.logD
    )
    return _finish(out, t)


def rhrf(spec: ModelSpec, t):
    """Reversed hazard rate pdf / cdf, via the closed form over D (D^theta - (alpha S)^theta)."""
    t = _interior(spec, t, "rhrf")
    theta, alpha, a, b = spec.family.as_tuple()
    p = _parts(spec, t)
    log_s_tilt = theta * (math.log(alpha) + b * p.logA - p.logD)
    with np.errstate(divide="ignore"):
        log_den = theta * p.logD + _log1mexp(log_s_tilt)
    if np.any(np.isneginf(log_den)):
        raise DomainError("rhrf undefined where cdf vanishes")
    out = np.exp(
        _log3(theta, a, b) + theta * math.log(alpha) + p.logg
        + _xlog(a - 1, p.logG) + _xlog(b * theta - 1, p.logA) - p.logD - log_den
    )
    return _finish(out, t)


def _invert_logsf(spec: ModelSpec, log_v):
    """Point with log sf equal to ``log_v`` (array, log_v <= 0)."""
    theta, alpha, a, b = spec.family.as_tuple()
    log_v = np.asarray(log_v, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_q = log_v / theta
        q = np.exp(log_q)
        # Kw-G survival value S = q / (alpha + alpha_bar q)
        log_s = log_q - np.log(alpha + (1.0 - alpha) * q)
        log_a = log_s / b
        log_g = _log1mexp(log_a) / a
        g = np.exp(log_g)
        gbar = -np.expm1(log_g)
    base = spec.baseline
    out = np.empty_like(log_v)
    low = g <= 0.5
    if low.any():
        out[low] = base.ppf(g[low])
    if (~low).any():
        out[~low] = base.isf(gbar[~low])
    lo, hi = base.support
    out = np.where(log_v == 0, lo, out)
    out = np.where(log_v == -np.inf, hi, out)
    return out


def quantile(spec: ModelSpec, p):
    """Inverse cdf by the closed-form inversion through G^{-1}; p in [0, 1)."""
    p_arr = np.asarray(p, dtype=float)
    if np.any(~((p_arr >= 0) & (p_arr < 1))):
        raise ArgumentError("p must lie in [0, 1)")
    return _finish(_invert_logsf(spec, np.log1p(-np.atleast_1d(p_arr))).reshape(p_arr.shape), p_arr)


def isf(spec: ModelSpec, v):
    """Inverse survival function; accurate for tiny upper-tail probabilities v."""
    v_arr = np.asarray(v, dtype=float)
    if np.any(~((v_arr > 0) & (v_arr <= 1))):
        raise ArgumentError("v must lie in (0, 1]")
    return _finish(_invert_logsf(spec, np.log(np.atleast_1d(v_arr))).reshape(v_arr.shape), v_arr)


def quantile_pair(spec: ModelSpec, p, pc):
    """Quantile at p given both p and pc = 1 - p, accurate in both tails."""
    p = np.asarray(p, dtype=float)
    pc = np.asarray(pc, dtype=float)
    with np.errstate(divide="ignore"):
        log_v = np.where(p < 0.5, np.log1p(-p), np.log(pc))
    return _invert_logsf(spec, log_v)


@dataclass(frozen=True)
class SampleBatch:
    values: np.ndarray = field(repr=False)
    seed: int
    spec: ModelSpec


def sample(spec: ModelSpec, n: int, seed: int, stream: int = 0) -> SampleBatch:
    """n inversion-method draws from stream ``stream`` of ``seed``."""
    n = int(n)
    if n < 0:
        raise ArgumentError("n must be >= 0")
    u = rng.uniform_open(rng.stream(seed, stream), n)
    # 1 - u is also open-uniform; inverting the sf keeps the upper tail accurate
    values = _invert_logsf(spec, np.log(u)) if n else np.empty(0)
    return SampleBatch(values, rng.check_seed(seed), spec)


def simulate_genesis(theta_int, alpha, a, b, baseline: Baseline, n, seed) -> SampleBatch:
    """Draws built as the minimum over theta groups of geometric extremes of Kw-G variates.

    Each group takes N ~ Geometric(p) on {1, 2, ...} Kw-G(a, b) draws and keeps
    their minimum (alpha <= 1, p = alpha) or maximum (alpha > 1, p = 1/alpha).
    """
    if int(theta_int) != theta_int or theta_int < 1:
        raise ArgumentError("theta must be a positive integer for the genesis construction")
    if not alpha > 0:
        raise ArgumentError("alpha must be > 0")
    theta_int, n = int(theta_int), int(n)
    kw = kw_spec(baseline, a, b)
    gen = rng.stream(seed, 1)
    p = alpha if alpha <= 1 else 1.0 / alpha
    counts = gen.geometric(p, size=n * theta_int)
    u = rng.uniform_open(gen, int(counts.sum()))
    draws = _invert_logsf(kw, np.log(u))
    starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
    extreme = np.minimum.reduceat if alpha <= 1 else np.maximum.reduceat
    groups = extreme(draws, starts).reshape(n, theta_int)
    spec = make_spec(baseline, theta_int, alpha, a, b)
    return SampleBatch(groups.min(axis=1), rng.check_seed(seed), spec)
