"""GMOKw-G: the generalized Marshall-Olkin Kumaraswamy-G family of distributions.

Evaluation, sampling, series expansions, moments and entropy, shape analysis
and likelihood inference for the family and its sub-models, with a
command-line front end (``gmokw``).
"""

__version__ = "0.1.0"

from .baselines import BASELINES, Baseline, make_baseline  # noqa: E402
from .family import (  # noqa: E402
    FamilyParams,
    ModelSpec,
    Variant,
    cdf,
    hrf,
    logpdf,
    make_spec,
    pdf,
    quantile,
    sample,
    sf,
)
from .inference import Dataset, FitConfig, aic, fit_mle, loglik, lr_test, score  # noqa: E402

__all__ = [
    "__version__",
    "BASELINES",
    "Baseline",
    "make_baseline",
    "FamilyParams",
    "ModelSpec",
    "Variant",
    "make_spec",
    "pdf",
    "cdf",
    "sf",
    "hrf",
    "logpdf",
    "quantile",
    "sample",
    "Dataset",
    "FitConfig",
    "fit_mle",
    "loglik",
    "score",
    "aic",
    "lr_test",
]
