"""Command-line interface.

Subcommands: ``fit``, ``compare``, ``sample``, ``eval``, ``check`` and
``plotdata``. Exit codes: 0 success, 1 usage, parse or domain error,
2 optimizer nonconvergence (output still written), 3 failed check suite.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, checks, family, inference, moments, shape
from .baselines import make_baseline
from .errors import GMOKwError
from .family import FAMILY_NAMES, FamilyParams, ModelSpec, Variant
from .inference import Dataset, FitConfig
from .report import FitReport, spec_from_report

EXIT_OK, EXIT_ERROR, EXIT_NONCONVERGED, EXIT_CHECK_FAILED = 0, 1, 2, 3

EVAL_QUANTITIES = ("pdf", "cdf", "sf", "hrf", "quantile", "entropy", "moment", "shape")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors share exit code 1 with other input errors
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _floats(text: str, what: str) -> list[float]:
    out = []
    for token in text.replace(",", " ").split():
        try:
            out.append(float(token))
        except ValueError:
            raise UsageError(f"{what}: cannot parse {token!r} as a number") from None
    return out


def _fmt(x) -> str:
    return format(float(x), ".17g")


# -- shared option groups ------------------------------------------------------------

def _add_fit_options(p):
    p.add_argument("--data", required=True, help="path to a text file of observations, or 'bundled'")
    p.add_argument("--baseline", default="weibull", help="baseline kind (default weibull)")
    p.add_argument("--seed", type=int, default=0, help="seed for the start design (default 0)")
    p.add_argument("--starts", type=int, default=40, help="number of optimizer starts (default 40)")
    p.add_argument("--tol", type=float, default=1e-10, help="simplex function tolerance (default 1e-10)")
    p.add_argument("--gamma", type=float, default=0.05, help="1 - confidence level (default 0.05)")
    p.add_argument("--no-timestamp", action="store_true", help="omit the timestamp from JSON output")


def _add_spec_options(p):
    p.add_argument("--model", default=None, help="variant; default is the smallest one consistent with the parameters")
    p.add_argument("--baseline", default="exponential", help="baseline kind (default exponential)")
    p.add_argument("--base-params", default=None, help="comma-separated baseline parameters in declared order")
    for name in FAMILY_NAMES:
        p.add_argument(f"--{name}", type=float, default=1.0)
    p.add_argument("--report", default=None, help="take the model from a fit report instead")


def _config(args) -> FitConfig:
    return FitConfig(n_starts=args.starts, seed=args.seed, f_tol=args.tol, gamma=args.gamma)


def _spec(args) -> ModelSpec:
    if args.report:
        return spec_from_report(_read_report(args.report))
    params = _floats(args.base_params, "--base-params") if args.base_params else []
    base = make_baseline(args.baseline, *params)
    fam = {n: getattr(args, n) for n in FAMILY_NAMES}
    if args.model is None:
        return family.make_spec(base, **fam)
    return ModelSpec(Variant.parse(args.model), FamilyParams(**fam), base)


def _read_report(path) -> FitReport:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return FitReport.from_json(text)


def _model_list(text):
    return [Variant.parse(m) for m in text.split(",") if m.strip()]


# -- commands ----------------------------------------------------------------------

def cmd_fit(args, out) -> int:
    data = Dataset.load(args.data)
    config = _config(args)
    fit = inference.fit_mle(data, Variant.parse(args.model), args.baseline, config)
    report = FitReport.from_fit(fit, data, config, timestamp=not args.no_timestamp)
    out.write(report.to_json())
    return EXIT_OK if fit.converged else EXIT_NONCONVERGED


def cmd_compare(args, out) -> int:
    data = Dataset.load(args.data)
    config = _config(args)
    variants = _model_list(args.models)
    if not variants:
        raise UsageError("--models lists no models")
    fits = inference.fit_models(data, variants, args.baseline, config)
    largest = max(fits.values(), key=lambda f: (f.k, f.variant.value))
    tests = {
        v: inference.lr_test(f, largest)
        for v, f in fits.items()
        if inference.is_nested(v, largest.variant)
    }
    ranked = sorted(fits.values(), key=lambda f: (f.aic, f.variant.value))
    reports = [
        FitReport.from_fit(f, data, config, [tests[f.variant]] if f.variant in tests else [],
                           timestamp=not args.no_timestamp)
        for f in ranked
    ]
    doc = {
        "schema": "gmokw-compare/1",
        "tool": {"name": "gmokw", "version": __version__},
        "baseline": largest.spec.baseline.kind,
        "dataset": {"label": data.label, "n": data.n, "source": data.source},
        "ranking": [f.variant.value for f in ranked],
        "lr_reference": largest.variant.value,
        "lr_tests": [
            {"null": v.value, "stat": t.stat, "df": t.df, "p": t.p_value}
            for v, t in sorted(tests.items(), key=lambda kv: fits[kv[0]].k)
        ],
        "reports": [r.to_dict() for r in reports],
    }
    text = json.dumps(doc, indent=2, allow_nan=False) + "\n"
    if args.json:
        try:
            Path(args.json).write_text(text)
        except OSError as exc:
            raise UsageError(f"cannot write {args.json}: {exc.strerror}") from None
    if args.format == "json":
        out.write(text)
    else:
        out.write(_compare_table(data, ranked, largest, tests, fits))
    return EXIT_OK if all(f.converged for f in fits.values()) else EXIT_NONCONVERGED


def _compare_table(data, ranked, largest, tests, fits) -> str:
    lines = [
        f"data: {data.label} (n={data.n}), baseline: {largest.spec.baseline.kind}",
        "",
        f"{'rank':>4}  {'model':<8}{'k':>3}  {'loglik':>11}  {'AIC':>10}  {'converged':<9}  boundary",
    ]
    for i, f in enumerate(ranked, 1):
        lines.append(
            f"{i:>4}  {f.variant.value:<8}{f.k:>3}  {f.loglik:>11.4f}  {f.aic:>10.4f}  "
            f"{'yes' if f.converged else 'no':<9}  {', '.join(f.on_boundary) or '-'}"
        )
    if tests:
        lines += ["", f"likelihood-ratio tests against {largest.variant.value}",
                  f"{'null':<8}{'stat':>9}{'df':>4}  {'p':>10}"]
        for v, t in sorted(tests.items(), key=lambda kv: fits[kv[0]].k):
            lines.append(f"{v.value:<8}{t.stat:>9.4f}{t.df:>4}  {t.p_value:>10.6f}")
    return "\n".join(lines) + "\n"


def cmd_sample(args, out) -> int:
    spec = _spec(args)
    if args.n < 0:
        raise UsageError("--n must be >= 0")
    batch = family.sample(spec, args.n, args.seed)
    text = "".join(f"{x:.16e}\n" for x in batch.values)
    try:
        with open(args.out, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {args.out}: {exc.strerror}") from None
    return EXIT_OK


def _points(args):
    if args.grid:
        parts = args.grid.split(":")
        if len(parts) != 3:
            raise UsageError("--grid takes lo:hi:n")
        lo, hi = _floats(parts[0], "--grid")[0], _floats(parts[1], "--grid")[0]
        try:
            n = int(parts[2])
        except ValueError:
            raise UsageError(f"--grid: cannot parse {parts[2]!r} as a count") from None
        return list(np.linspace(lo, hi, n))
    if args.x:
        return _floats(args.x, "--x")
    raise UsageError("give evaluation points with --x or --grid")


def _pointwise(fun, points, label):
    rows = []
    for x in points:
        try:
            rows.append((x, float(fun(np.array([x]))[0])))
        except GMOKwError as exc:
            raise UsageError(f"{label}={_fmt(x)}: {exc}") from None
    return rows


def cmd_eval(args, out) -> int:
    spec = _spec(args)
    what = args.what
    rows = []
    if what in ("pdf", "cdf", "sf", "hrf"):
        fun = {"pdf": family.pdf, "cdf": family.cdf, "sf": family.sf, "hrf": family.hrf}[what]
        rows = _pointwise(lambda t: fun(spec, t), _points(args), "t")
    elif what == "quantile":
        if not args.p:
            raise UsageError("quantile needs --p")
        rows = _pointwise(lambda p: family.quantile(spec, p), _floats(args.p, "--p"), "p")
    elif what == "entropy":
        for d in _floats(args.delta or "2", "--delta"):
            try:
                rows.append((d, moments.renyi(moments.EntropyQuery(d, spec), rtol=args.tol)))
            except GMOKwError as exc:
                raise UsageError(f"delta={_fmt(d)}: {exc}") from None
    elif what == "moment":
        for s in _floats(args.s or "1", "--s"):
            try:
                rows.append((s, moments.moment_quadrature(spec, s, rtol=args.tol)))
            except GMOKwError as exc:
                raise UsageError(f"s={_fmt(s)}: {exc}") from None
    else:
        return _eval_shape(spec, out)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "value"])
    for x, v in rows:
        w.writerow([_fmt(x), _fmt(v)])
    out.write(buf.getvalue())
    return EXIT_OK


def _eval_shape(spec, out) -> int:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "value", "kind"])
    for mode in ("density", "hazard"):
        for cp in shape.critical_points(spec, mode):
            w.writerow([_fmt(cp.location), _fmt(cp.discriminant), f"{mode} {cp.kind}"])
    for endpoint in ("lower", "upper"):
        for quantity in ("pdf", "hrf"):
            rep = shape.asymptote(spec, endpoint, quantity)
            w.writerow([_fmt(rep.probe), _fmt(rep.ratio_at_probe), f"asymptote {endpoint} {quantity}"])
    out.write(buf.getvalue())
    return EXIT_OK


def cmd_check(args, out) -> int:
    names = list(checks.SUITES) if args.suites == ["all"] else args.suites
    unknown = [n for n in names if n not in checks.SUITES]
    if unknown:
        raise UsageError(
            f"unknown suite {unknown[0]!r}; valid suites: {', '.join(checks.SUITES)}, all"
        )
    failed = 0
    for name in names:
        result = checks.run_suite(name)
        out.write(result.line() + "\n")
        out.flush()
        failed += not result.passed
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def cmd_plotdata(args, out) -> int:
    data = Dataset.load(args.data)
    if args.reports:
        specs = {}
        for path in args.reports:
            rep = _read_report(path)
            specs[f"{rep.model}-{rep.baseline}"] = spec_from_report(rep)
        status = EXIT_OK
    else:
        config = _config(args)
        fits = inference.fit_models(data, _model_list(args.models), args.baseline, config)
        specs = {f"{v.value}-{f.spec.baseline.kind}": f.spec for v, f in fits.items()}
        status = EXIT_OK if all(f.converged for f in fits.values()) else EXIT_NONCONVERGED
    t = np.sort(data.values)
    for spec in specs.values():
        inference._check_support(spec, t)

    edges = np.histogram_bin_edges(t, bins="fd")
    heights, _ = np.histogram(t, bins=edges, density=True)
    grid = np.linspace(edges[0], edges[-1], args.points)
    which = np.clip(np.searchsorted(edges, grid, side="right") - 1, 0, heights.size - 1)
    pdf_cols = {name: family.pdf(s, grid) for name, s in specs.items()}

    cgrid = np.union1d(np.linspace(t[0], t[-1], args.points), t)
    ecdf = np.searchsorted(t, cgrid, side="right") / t.size
    cdf_cols = {name: family.cdf(s, cgrid) for name, s in specs.items()}

    out_dir = Path(args.out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        paths = []
        for fname, xs, emp, cols in (
            ("histogram.csv", grid, heights[which], pdf_cols),
            ("cdf.csv", cgrid, ecdf, cdf_cols),
        ):
            path = out_dir / fname
            with open(path, "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(["t", "empirical", *cols])
                for i, x in enumerate(xs):
                    w.writerow([_fmt(x), _fmt(emp[i]), *(_fmt(c[i]) for c in cols.values())])
            paths.append(path)
    except OSError as exc:
        raise UsageError(f"cannot write plot data to {out_dir}: {exc.strerror}") from None
    for path in paths:
        out.write(f"{path}\n")
    return status


# -- entry point -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gmokw", description="GMOKw-G distributions: fitting, evaluation and checks.")
    parser.add_argument("--version", action="version", version=f"gmokw {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fit", help="fit one model and print a JSON report")
    _add_fit_options(p)
    p.add_argument("--model", default="gmokw", help="gmokw, mokw, kw, gmo, mo or baseline (default gmokw)")
    p.set_defaults(run=cmd_fit)

    p = sub.add_parser("compare", help="fit several models, rank by AIC, run LR tests")
    _add_fit_options(p)
    p.add_argument("--models", default="mo,kw,mokw,gmokw", help="comma-separated models")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--json", default=None, help="also write the JSON document to this path")
    p.set_defaults(run=cmd_compare)

    p = sub.add_parser("sample", help="draw a random sample by inversion")
    _add_spec_options(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output file, one value per line")
    p.set_defaults(run=cmd_sample)

    p = sub.add_parser("eval", help="evaluate a quantity and print CSV")
    p.add_argument("what", choices=EVAL_QUANTITIES)
    _add_spec_options(p)
    p.add_argument("--x", default=None, help="comma-separated evaluation points")
    p.add_argument("--grid", default=None, help="lo:hi:n evenly spaced points")
    p.add_argument("--p", default=None, help="comma-separated probabilities (quantile)")
    p.add_argument("--delta", default=None, help="comma-separated entropy orders (default 2)")
    p.add_argument("--s", default=None, help="comma-separated moment orders (default 1)")
    p.add_argument("--tol", type=float, default=1e-11, help="relative quadrature tolerance")
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("check", help="run self-check suites")
    p.add_argument("suites", nargs="+", metavar="SUITE", help=f"one or more of: {', '.join(checks.SUITES)}, all")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("plotdata", help="write histogram/pdf and ecdf/cdf curves as CSV")
    _add_fit_options(p)
    p.add_argument("--models", default="mo,kw,mokw,gmokw", help="models to refit (ignored with --reports)")
    p.add_argument("--reports", nargs="*", default=None, help="fit report files to plot instead of refitting")
    p.add_argument("--out-dir", default=".", help="directory for histogram.csv and cdf.csv")
    p.add_argument("--points", type=int, default=201, help="grid size for the fitted curves")
    p.set_defaults(run=cmd_plotdata)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return args.run(args, out)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_ERROR
    except (GMOKwError, ValueError) as exc:
        print(f"gmokw: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
