"""Machine-readable fit reports.

A report is a flat JSON document with a pinned schema tag and a fixed key
order. Non-finite numbers are written as ``null`` and listed in ``flags``, so
every report is valid JSON and parses back to an equal object.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .baselines import make_baseline
from .errors import ArgumentError
from .family import FAMILY_NAMES, FamilyParams, ModelSpec, Variant

__all__ = ["SCHEMA", "FitReport", "LRLine", "spec_from_report"]

SCHEMA = "gmokw-fit-report/1"


def _num(x):
    x = float(x)
    return x if math.isfinite(x) else None


@dataclass(frozen=True)
class LRLine:
    null: str
    stat: float
    df: int
    p: float


@dataclass(frozen=True)
class FitReport:
    model: str
    baseline: str
    dataset: dict
    estimate: dict
    se: dict
    ci: dict
    gamma: float
    loglik: float
    aic: float
    k: int
    converged: bool
    on_boundary: list
    flags: list
    starts: dict
    lr_tests: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    tool: dict = field(default_factory=lambda: {"name": "gmokw", "version": __version__})
    schema: str = SCHEMA
    timestamp: str | None = None

    @classmethod
    def from_fit(cls, fit, dataset, config, lr_tests=(), timestamp=True) -> "FitReport":
        names = list(fit.names)
        flags = list(fit.flags)
        se = {n: _num(v) for n, v in zip(names, fit.se)}
        if any(v is None for v in se.values()) and not any("standard errors" in f for f in flags):
            flags.append("standard errors unavailable for: " + ", ".join(n for n, v in se.items() if v is None))
        return cls(
            model=fit.variant.value,
            baseline=fit.spec.baseline.kind,
            dataset={"label": dataset.label, "n": dataset.n, "source": dataset.source},
            estimate={n: float(v) for n, v in zip(names, fit.estimate)},
            se=se,
            ci={n: [_num(lo), _num(hi)] for n, (lo, hi) in zip(names, fit.ci)},
            gamma=float(fit.gamma),
            loglik=float(fit.loglik),
            aic=float(fit.aic),
            k=int(fit.k),
            converged=bool(fit.converged),
            on_boundary=list(fit.on_boundary),
            flags=flags,
            starts={k: (float(v) if isinstance(v, float) else v) for k, v in fit.starts_summary.items()},
            lr_tests=[LRLine(t.null_variant.value, float(t.stat), int(t.df), float(t.p_value)) for t in lr_tests],
            config={
                "n_starts": config.n_starts,
                "start_box": list(config.start_box),
                "max_iter": config.max_iter,
                "f_tol": config.f_tol,
                "x_tol": config.x_tol,
                "seed": int(config.seed),
            },
            timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds") if timestamp else None,
        )

    def to_dict(self) -> dict:
        out = {"schema": self.schema, "tool": dict(self.tool)}
        if self.timestamp is not None:
            out["timestamp"] = self.timestamp
        for f in fields(self):
            if f.name in ("schema", "tool", "timestamp"):
                continue
            value = getattr(self, f.name)
            if f.name == "lr_tests":
                value = [asdict(line) for line in value]
            out[f.name] = value
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"

    @classmethod
    def from_dict(cls, doc: dict) -> "FitReport":
        if doc.get("schema") != SCHEMA:
            raise ArgumentError(f"unsupported report schema {doc.get('schema')!r}; expected {SCHEMA}")
        names = {f.name for f in fields(cls)}
        unknown = set(doc) - names
        if unknown:
            raise ArgumentError(f"unknown report keys: {', '.join(sorted(unknown))}")
        kwargs = dict(doc)
        kwargs["lr_tests"] = [LRLine(**line) for line in doc.get("lr_tests", [])]
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise ArgumentError(f"malformed report: {exc}") from None

    @classmethod
    def from_json(cls, text: str) -> "FitReport":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ArgumentError(f"report is not valid JSON: {exc}") from None
        return cls.from_dict(doc)


def spec_from_report(report: FitReport) -> ModelSpec:
    """Rebuild the fitted model from a report."""
    variant = Variant.parse(report.model)
    template = make_baseline(report.baseline)
    try:
        fam = {n: report.estimate.get(n, 1.0) for n in FAMILY_NAMES}
        base = template.with_params(np.array([report.estimate[n] for n in template.param_names]))
    except KeyError as exc:
        raise ArgumentError(f"report lacks an estimate for {exc.args[0]}") from None
    return ModelSpec(variant, FamilyParams(**fam), base)
