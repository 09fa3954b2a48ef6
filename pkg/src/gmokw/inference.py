"""Likelihood inference: log-likelihood, score, multi-start maximum likelihood,
observed information, Wald intervals, AIC and nested likelihood-ratio tests.

Parameters are optimised on the log scale inside a bounded box (default
[1e-3, 1e3] per parameter). The box is part of the model: on some data sets
the unrestricted likelihood grows without bound along degenerate directions,
so an estimate that lands on a box face is flagged rather than silently
reported as an interior optimum.
"""

from __future__ import annotations

import hashlib
import math
import os
import re
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.optimize import minimize
from scipy.special import gammaincc, ndtri
from scipy.stats import qmc

from . import exp_derivatives, family
from .baselines import Baseline, Exponential, make_baseline
from .errors import (
    ArgumentError,
    DomainError,
    NotNestedError,
    NumericalFailure,
    SingularInformationError,
)
from .family import ModelSpec, Variant

__all__ = [
    "LOGLIK_FLOOR",
    "Dataset",
    "FitConfig",
    "FitResult",
    "LRTestResult",
    "loglik",
    "score",
    "fit_mle",
    "fit_models",
    "is_nested",
    "embed",
    "observed_info",
    "std_errors_ci",
    "aic",
    "lr_test",
    "lr_from_logliks",
    "chisq_sf",
    "z_quantile",
]

# stands in for -inf so optimisers see a finite objective
LOGLIK_FLOOR = -1e300
_EPS = np.finfo(float).eps


# -- data -----------------------------------------------------------------

_SEP = re.compile(r"[\s,]+")


@dataclass(frozen=True)
class Dataset:
    """Positive observations with a label and where they came from."""

    values: np.ndarray
    label: str = "data"
    source: str = "inline"

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).ravel()
        if v.size == 0:
            raise ArgumentError("no observations")
        if not np.all(np.isfinite(v)) or np.any(v <= 0):
            raise ArgumentError("observations must be positive and finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return int(self.values.size)

    @classmethod
    def from_text(cls, text: str, label="data", source="inline") -> "Dataset":
        """Parse whitespace/comma separated numbers; '#' starts a comment."""
        vals = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            for token in _SEP.split(body):
                if not token:
                    continue
                try:
                    x = float(token)
                except ValueError:
                    raise ArgumentError(f"line {lineno}: cannot parse {token!r} as a number") from None
                if not (math.isfinite(x) and x > 0):
                    raise ArgumentError(f"line {lineno}: observation {token} is not a positive number")
                vals.append(x)
        if not vals:
            raise ArgumentError("no observations")
        return cls(np.array(vals), label, source)

    @classmethod
    def from_file(cls, path, label=None) -> "Dataset":
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ArgumentError(f"cannot read {path}: {exc.strerror}") from None
        return cls.from_text(text, label or path.stem, str(path))

    @classmethod
    def bundled(cls) -> "Dataset":
        """Survival times (years) of 45 head-and-neck cancer patients treated
        with chemotherapy alone."""
        text = resources.files("gmokw").joinpath("data/chemo.txt").read_text()
        return cls.from_text(text, "chemo", "bundled")

    @classmethod
    def load(cls, where) -> "Dataset":
        """``"bundled"`` or a path."""
        if str(where) == "bundled":
            return cls.bundled()
        return cls.from_file(where)


def _values(data):
    if isinstance(data, Dataset):
        return data.values
    return np.asarray(data, dtype=float).ravel()


# -- likelihood -------------------------------------------------------------

def _check_support(spec, t):
    lo, hi = spec.baseline.support
    bad = (t <= lo) | (t >= hi) | ~np.isfinite(t)
    if np.any(bad):
        x = float(t[np.argmax(bad)])
        raise DomainError(f"observation {x!r} is outside the support ({lo}, {hi}) of {spec.baseline}")


def loglik(spec: ModelSpec, data) -> float:
    """Sum of log densities; ``LOGLIK_FLOOR`` when some density is zero."""
    t = _values(data)
    _check_support(spec, t)
    total = float(np.sum(family.logpdf(spec, t)))
    if not math.isfinite(total) or total < LOGLIK_FLOOR:
        return LOGLIK_FLOOR
    return total


def _full_score(spec: ModelSpec, t) -> np.ndarray:
    """Score for (theta, alpha, a, b, baseline params...) regardless of variant."""
    theta, alpha, a, b = spec.family.as_tuple()
    base = spec.baseline
    n = t.size
    p = family._parts(spec, t)
    ab = 1.0 - alpha
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        S_D = np.exp(b * p.logA - p.logD)
        Ga_A = np.exp(a * p.logG - p.logA)  # G^a / A
        lG = p.logG
        lA = p.logA
        u_theta = n / theta + n * math.log(alpha) + b * lA.sum() - p.logD.sum()
        u_alpha = n * theta / alpha - (theta + 1) * S_D.sum()
        u_a = (
            n / a + lG.sum() - (b * theta - 1) * np.sum(Ga_A * lG)
            - (theta + 1) * ab * b * np.sum(S_D * Ga_A * lG)
        )
        u_b = n / b + theta * lA.sum() + (theta + 1) * ab * np.sum(S_D * lA)
        # chain factor through log G
        w = (a - 1) - (b * theta - 1) * a * Ga_A - (theta + 1) * ab * a * b * S_D * Ga_A
        u_base = base.grad_logpdf(t).sum(axis=1) + base.grad_logcdf(t) @ w
    return np.concatenate([[u_theta, u_alpha, u_a, u_b], np.atleast_1d(u_base)])


def score(spec: ModelSpec, data) -> np.ndarray:
    """Analytic gradient of :func:`loglik` over the free parameters of the
    variant, in the order (theta, alpha, a, b, baseline params...)."""
    t = _values(data)
    _check_support(spec, t)
    full = _full_score(spec, t)
    fam = [i for i, n in enumerate(family.FAMILY_NAMES) if n in spec.variant.free_family]
    idx = fam + list(range(4, full.size))
    return full[idx]


# -- information and intervals ---------------------------------------------

def observed_info(spec: ModelSpec, data, method="finite_diff") -> np.ndarray:
    """Negative Hessian of the log-likelihood over the free parameters.

    ``finite_diff`` differences the analytic score with steps
    ``eps**(1/3) * max(1, |x_j|)`` (shrunk to half the value when that would
    leave the parameter space) and symmetrises. ``analytic_gmokwe`` uses the
    closed-form second derivatives, available for the full GMOKw-E model only.
    """
    t = _values(data)
    if method == "analytic_gmokwe":
        if spec.variant != Variant.GMOKWG or not isinstance(spec.baseline, Exponential):
            raise ArgumentError("analytic_gmokwe needs a GMOKwG spec with an exponential baseline")
        _check_support(spec, t)
        params = list(spec.family.as_tuple()) + [spec.baseline.lam]
        info = -exp_derivatives.gmokwe_hessian(params, t)
    elif method == "finite_diff":
        x = spec.free_values
        k = x.size
        info = np.empty((k, k))
        for j in range(k):
            h = _EPS ** (1 / 3) * max(1.0, abs(x[j]))
            h = min(h, 0.5 * x[j])
            up, dn = x.copy(), x.copy()
            up[j] += h
            dn[j] -= h
            info[:, j] = -(score(spec.with_free(up), t) - score(spec.with_free(dn), t)) / (2 * h)
    else:
        raise ArgumentError("method must be 'finite_diff' or 'analytic_gmokwe'")
    info = 0.5 * (info + info.T)
    if not np.all(np.isfinite(info)):
        raise NumericalFailure("observed information has non-finite entries")
    return info


def z_quantile(gamma: float) -> float:
    """Upper gamma/2 point of the standard normal."""
    if not 0 < gamma < 1:
        raise ArgumentError("gamma must lie in (0, 1)")
    return float(-ndtri(gamma / 2))


def std_errors_ci(info, estimate, gamma=0.05):
    """Covariance, standard errors and Wald intervals ``x_j -/+ z se_j``.

    Raises
    ------
    SingularInformationError
        If ``info`` cannot be inverted. A negative diagonal of the inverse
        (indefinite information) gives NaN standard errors rather than an
        error, since the point estimate is still usable.
    """
    info = np.asarray(info, dtype=float)
    estimate = np.asarray(estimate, dtype=float)
    z = z_quantile(gamma)
    try:
        cond = np.linalg.cond(info)
        if not np.isfinite(cond) or cond > 1 / _EPS:
            raise np.linalg.LinAlgError
        cov = np.linalg.inv(info)
    except np.linalg.LinAlgError:
        raise SingularInformationError("observed information is singular") from None
    cov = 0.5 * (cov + cov.T)
    diag = np.diag(cov)
    with np.errstate(invalid="ignore"):
        se = np.where(diag >= 0, np.sqrt(np.abs(diag)), np.nan)
    ci = np.column_stack([estimate - z * se, estimate + z * se])
    return cov, se, ci


def aic(k: int, loglik_value: float) -> float:
    """Akaike information criterion ``2k - 2 loglik``."""
    return 2 * k - 2 * loglik_value


def chisq_sf(x: float, df: int) -> float:
    """Chi-square survival function via the regularised upper incomplete gamma."""
    if not (isinstance(df, (int, np.integer)) and df > 0):
        raise ArgumentError("df must be a positive integer")
    if not (math.isfinite(x) and x >= 0):
        raise ArgumentError("x must be a finite nonnegative number")
    return float(gammaincc(df / 2, x / 2))


# -- fitting -----------------------------------------------------------------

@dataclass(frozen=True)
class FitConfig:
    """Optimiser settings.

    ``start_box`` bounds both the quasi-random starts and the search itself,
    on the natural scale.
    """

    n_starts: int = 40
    start_box: tuple[float, float] = (1e-3, 1e3)
    max_iter: int = 4000
    f_tol: float = 1e-10
    x_tol: float = 1e-8
    seed: int = 0
    gamma: float = 0.05
    threads: int | None = None

    def __post_init__(self):
        lo, hi = self.start_box
        if not (0 < lo < hi and math.isfinite(hi)):
            raise ArgumentError("start_box must satisfy 0 < low < high < inf")
        if self.n_starts < 1 or self.max_iter < 1:
            raise ArgumentError("n_starts and max_iter must be positive")
        if not (self.f_tol > 0 and self.x_tol > 0):
            raise ArgumentError("tolerances must be positive")
        if not (0 <= int(self.seed) < 2**64):
            raise ArgumentError("seed must be a 64-bit unsigned integer")
        z_quantile(self.gamma)


@dataclass
class FitResult:
    variant: Variant
    spec: ModelSpec
    names: tuple[str, ...]
    estimate: np.ndarray
    loglik: float
    aic: float
    k: int
    n: int
    cov: np.ndarray
    se: np.ndarray
    ci: np.ndarray
    gamma: float
    converged: bool
    on_boundary: tuple[str, ...]
    starts_summary: dict
    info_condition: float
    flags: list = field(default_factory=list)
    data_key: tuple = ()

    @property
    def estimates(self) -> dict:
        return dict(zip(self.names, map(float, self.estimate)))


@dataclass(frozen=True)
class _StartOutcome:
    index: int
    x: np.ndarray  # log parameters
    loglik: float
    success: bool


def _thread_count(config, n_tasks):
    if config.threads is not None:
        cap = config.threads
    else:
        env = os.environ.get("GMOKW_THREADS")
        try:
            cap = int(env) if env else (os.cpu_count() or 1)
        except ValueError:
            raise ArgumentError("GMOKW_THREADS must be an integer") from None
    return max(1, min(cap, n_tasks))


def _sobol_starts(k, config):
    # scrambled Sobol points; a shorter run is a prefix of a longer one
    m = max(0, math.ceil(math.log2(config.n_starts)))
    rng = np.random.default_rng(np.random.SeedSequence(int(config.seed)))
    pts = qmc.Sobol(k, scramble=True, seed=rng).random_base2(m)[: config.n_starts]
    lo, hi = np.log(config.start_box)
    return lo + pts * (hi - lo)


class _Objective:
    """Negative log-likelihood over log parameters, with its gradient."""

    def __init__(self, template: ModelSpec, t):
        self.template = template
        self.t = t

    def spec(self, x):
        return self.template.with_free(np.exp(x))

    def __call__(self, x):
        try:
            s = self.spec(x)
            with np.errstate(all="ignore"):
                v = float(np.sum(family.logpdf(s, self.t)))
        except (ValueError, OverflowError, FloatingPointError):
            return -LOGLIK_FLOOR
        return -v if math.isfinite(v) else -LOGLIK_FLOOR

    def grad(self, x):
        try:
            with np.errstate(all="ignore"):
                g = score(self.spec(x), self.t) * np.exp(x)
        except (ValueError, OverflowError, FloatingPointError):
            return np.zeros_like(x)
        return np.where(np.isfinite(g), -g, 0.0)


def _run_start(obj, index, x0, bounds, config):
    k = x0.size
    opts = dict(maxiter=config.max_iter * k, maxfev=config.max_iter * k,
                xatol=config.x_tol, fatol=config.f_tol, adaptive=True)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        r = minimize(obj, x0, method="Nelder-Mead", bounds=bounds, options=opts)
        # a restart rebuilds the simplex, which shakes off premature collapse
        r = minimize(obj, r.x, method="Nelder-Mead", bounds=bounds, options=opts)
    return _StartOutcome(index, r.x, -float(r.fun), bool(r.success))


def _merge(outcomes):
    # max loglik; ties by lexicographically smaller log-parameter vector
    return min(outcomes, key=lambda o: (-o.loglik, tuple(o.x)))


def _polish(obj, x, bounds, config):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        r = minimize(obj, x, jac=obj.grad, method="L-BFGS-B", bounds=bounds,
                     options=dict(maxiter=2000, ftol=1e-15, gtol=1e-10))
    if -r.fun >= -obj(x):
        return r.x
    return x


def _projected_gradient(obj, x, bounds):
    g = obj.grad(x)
    lo = np.array([b[0] for b in bounds])
    hi = np.array([b[1] for b in bounds])
    # components pushing out of the box are satisfied at the face
    g = np.where((x <= lo + 1e-9) & (g > 0), 0.0, g)
    g = np.where((x >= hi - 1e-9) & (g < 0), 0.0, g)
    return g


def embed(spec: ModelSpec, variant) -> ModelSpec:
    """The same distribution re-expressed as a (larger) variant."""
    variant = Variant.parse(variant)
    return ModelSpec(variant, spec.family, spec.baseline)


def _template(variant, baseline) -> ModelSpec:
    if isinstance(baseline, str):
        baseline = make_baseline(baseline)
    if not isinstance(baseline, Baseline):
        raise ArgumentError("baseline must be a kind name or a Baseline")
    return ModelSpec(Variant.parse(variant), family.FamilyParams(), baseline)


def fit_mle(data, variant, baseline, config: FitConfig | None = None, seeds=()) -> FitResult:
    """Maximum likelihood fit of a variant with a given baseline kind.

    Parameters
    ----------
    data : Dataset or array_like
    variant : Variant or str
    baseline : str or Baseline
        Kind name, or an instance whose parameter values are ignored.
    config : FitConfig, optional
    seeds : sequence of ModelSpec
        Extra starting points, e.g. the optimum of a nested model embedded
        with :func:`embed`. Points outside the box are clipped onto it.

    Returns
    -------
    FitResult
        Always returned; ``converged`` is False when the best start failed
        its stopping rule or the projected score is not small.

    Notes
    -----
    Each start runs Nelder-Mead twice over log parameters inside the box;
    the best start is then polished with L-BFGS-B on the analytic score.
    Starts are independent, so results do not depend on the thread count.
    """
    config = config or FitConfig()
    t = _values(data)
    template = _template(variant, baseline)
    _check_support(template, t)
    k = template.n_free
    if t.size < k + 1:
        raise ArgumentError(f"need at least {k + 1} observations to fit {k} parameters")
    obj = _Objective(template, t)
    lo, hi = np.log(config.start_box)
    bounds = [(lo, hi)] * k

    starts = list(_sobol_starts(k, config))
    for s in seeds:
        s = embed(s, template.variant) if s.variant != template.variant else s
        starts.append(np.clip(np.log(s.free_values), lo, hi))

    n_threads = _thread_count(config, len(starts))
    jobs = list(enumerate(starts))
    if n_threads == 1:
        outcomes = [_run_start(obj, i, x0, bounds, config) for i, x0 in jobs]
    else:
        with ThreadPoolExecutor(n_threads) as pool:
            outcomes = list(pool.map(lambda job: _run_start(obj, job[0], job[1], bounds, config), jobs))

    best = _merge(outcomes)
    x = _polish(obj, best.x, bounds, config)
    spec = obj.spec(x)
    ll = loglik(spec, t)
    est = spec.free_values

    pg = _projected_gradient(obj, x, bounds)
    stationary = float(np.max(np.abs(pg))) <= 1e-4 * max(1.0, abs(ll))
    converged = best.success and stationary and ll > LOGLIK_FLOOR
    face = np.isclose(x, lo, rtol=0, atol=1e-6) | np.isclose(x, hi, rtol=0, atol=1e-6)
    on_boundary = tuple(n for n, f in zip(template.free_names, face) if f)

    flags = []
    if on_boundary:
        flags.append("estimate on the search-box boundary: " + ", ".join(on_boundary))
    if not converged:
        flags.append("optimizer did not converge")
    nan = np.full(k, np.nan)
    cov, se, ci, cond = np.full((k, k), np.nan), nan, np.column_stack([nan, nan]), math.inf
    try:
        info = observed_info(spec, t)
        cond = float(np.linalg.cond(info))
        cov, se, ci = std_errors_ci(info, est, config.gamma)
        if np.any(np.isnan(se)):
            flags.append("observed information is not positive definite")
        if cond > 1e10:
            flags.append(f"ill-conditioned information (condition number {cond:.3g})")
    except (SingularInformationError, NumericalFailure) as exc:
        flags.append(str(exc))

    lls = [o.loglik for o in outcomes]
    summary = {
        "n_starts": len(outcomes),
        "best": float(max(lls)),
        "worst": float(min(lls)),
        "n_success": int(sum(o.success for o in outcomes)),
        "best_start": int(best.index),
    }
    return FitResult(
        variant=template.variant, spec=spec, names=template.free_names, estimate=est,
        loglik=ll, aic=aic(k, ll), k=k, n=int(t.size), cov=cov, se=se, ci=ci,
        gamma=config.gamma, converged=bool(converged), on_boundary=on_boundary,
        starts_summary=summary, info_condition=cond, flags=flags,
        data_key=(template.baseline.kind, t.size, hashlib.sha256(t.tobytes()).hexdigest()[:16]),
    )


def fit_models(data, variants, baseline, config: FitConfig | None = None) -> dict:
    """Fit several variants in order of increasing size.

    Each fit is seeded with the optima of the already fitted variants nested
    in it, so a larger model never ends below a smaller one it contains.
    """
    variants = sorted({Variant.parse(v) for v in variants}, key=lambda v: (len(v.free_family), v.value))
    fits = {}
    for v in variants:
        seeds = [f.spec for f in fits.values() if is_nested(f.variant, v)]
        fits[v] = fit_mle(data, v, baseline, config, seeds=seeds)
    return fits


# -- likelihood-ratio tests ------------------------------------------------------

@dataclass(frozen=True)
class LRTestResult:
    stat: float
    df: int
    p_value: float
    null_variant: Variant | None = None
    alt_variant: Variant | None = None


def is_nested(null, alt) -> bool:
    """True when ``null`` fixes every family parameter ``alt`` fixes, and more."""
    null, alt = Variant.parse(null), Variant.parse(alt)
    return set(alt.fixed) < set(null.fixed)



def lr_from_logliks(loglik_null, loglik_alt, df, null_variant=None, alt_variant=None) -> LRTestResult:
    """LR statistic and chi-square p-value from two maximised log-likelihoods.

    A slightly negative statistic (alternative fit short of the null optimum
    by optimiser noise) is clipped to zero.
    """
    stat = max(0.0, -2.0 * (loglik_null - loglik_alt))
    return LRTestResult(stat, int(df), chisq_sf(stat, int(df)), null_variant, alt_variant)


def lr_test(fit_null: FitResult, fit_alt: FitResult) -> LRTestResult:
    """Likelihood-ratio test of a nested variant against a larger one."""
    if not is_nested(fit_null.variant, fit_alt.variant):
        raise NotNestedError(f"{fit_null.variant.value} is not nested in {fit_alt.variant.value}")
    if fit_null.data_key != fit_alt.data_key:
        raise NotNestedError("the fits use different data or baselines")
    return lr_from_logliks(
        fit_null.loglik, fit_alt.loglik, fit_alt.k - fit_null.k, fit_null.variant, fit_alt.variant
    )
