"""Density and hazard shapes of a few GMOKw-Weibull members: critical
points, lower-tail asymptotes and low-order moments."""

import numpy as np

from gmokw import family, moments, shape
from gmokw.baselines import Weibull
from gmokw.moments import EntropyQuery

CASES = {
    "unimodal": family.make_spec(Weibull(1.0, 1.5), theta=2.0, alpha=0.5, a=1.5, b=0.8),
    "bathtub hazard": family.make_spec(Weibull(1.0, 3.0), a=0.2),
    "high alpha": family.make_spec(Weibull(1.0, 1.5), theta=0.7, alpha=4.0, a=2.0, b=1.2),
}


def main():
    for label, spec in CASES.items():
        print(f"{label}: {spec.variant.value} {spec.family.as_tuple()} over {spec.baseline}")
        for mode in ("density", "hazard"):
            for c in shape.critical_points(spec, mode):
                print(f"  {mode} {c.kind} at t = {c.location:.6g}")
        for q in ("pdf", "hrf"):
            rep = shape.asymptote(spec, "lower", q)
            print(f"  lower {q} leading form ratio {rep.ratio_at_probe:.6f} at t = {rep.probe:.3g}")
        mean = moments.moment_quadrature(spec, 1)
        var = moments.moment_quadrature(spec, 2) - mean**2
        h2 = moments.renyi(EntropyQuery(2.0, spec))
        print(f"  mean {mean:.6g}  sd {np.sqrt(var):.6g}  Renyi(2) {h2:.6g}")
        print(f"  quartiles {np.round(family.quantile(spec, np.array([0.25, 0.5, 0.75])), 6)}\n")


if __name__ == "__main__":
    main()
