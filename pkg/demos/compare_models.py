"""Fit the four Weibull-baseline models to the bundled survival times and
rank them by AIC, with likelihood-ratio tests against the full model.

    python demos/compare_models.py [--starts N]
"""

import argparse
import time

from gmokw import inference
from gmokw.inference import Dataset, FitConfig

MODELS = ("mo", "kw", "mokw", "gmokw")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--starts", type=int, default=40)
    args = ap.parse_args()

    data = Dataset.bundled()
    t0 = time.perf_counter()
    fits = inference.fit_models(data, MODELS, "weibull", FitConfig(n_starts=args.starts))
    print(f"{data.n} observations, {time.perf_counter() - t0:.0f}s\n")
    print(f"{'model':<8}{'k':>3}{'loglik':>11}{'AIC':>10}  boundary")
    for v, fit in sorted(fits.items(), key=lambda kv: kv[1].aic):
        print(f"{v.value:<8}{fit.k:>3}{fit.loglik:>11.3f}{fit.aic:>10.2f}  {','.join(fit.on_boundary) or '-'}")

    full = max(fits.values(), key=lambda f: f.k)
    print(f"\nlikelihood-ratio tests against {full.variant.value}")
    for fit in fits.values():
        if inference.is_nested(fit.variant, full.variant):
            lr = inference.lr_test(fit, full)
            print(f"  {fit.variant.value:<8} stat {lr.stat:7.3f}  df {lr.df}  p {lr.p_value:.5f}")

    print(f"\n{full.variant.value} estimates")
    for name, est, se in zip(full.names, full.estimate, full.se):
        print(f"  {name:<6}{est:12.5g}  se {se:.3g}")


if __name__ == "__main__":
    main()
