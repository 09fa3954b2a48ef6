import json

import pytest

from gmokw import inference
from gmokw.errors import ArgumentError
from gmokw.inference import Dataset, FitConfig
from gmokw.report import SCHEMA, FitReport, spec_from_report


@pytest.fixture(scope="module")
def report():
    data = Dataset.bundled()
    cfg = FitConfig(n_starts=4)
    null = inference.fit_mle(data, "mo", "weibull", cfg)
    alt = inference.fit_mle(data, "gmo", "weibull", cfg, seeds=[null.spec])
    lr = inference.lr_test(null, alt)
    return FitReport.from_fit(alt, data, cfg, lr_tests=[lr], timestamp=False), alt


def test_round_trip(report):
    rep, _ = report
    text = rep.to_json()
    assert FitReport.from_json(text) == rep
    assert FitReport.from_json(text).to_json() == text


def test_schema_and_key_order(report):
    rep, fit = report
    doc = json.loads(rep.to_json())
    assert list(doc)[:2] == ["schema", "tool"]
    assert doc["schema"] == SCHEMA
    assert "timestamp" not in doc
    assert doc["model"] == "GMO" and doc["baseline"] == "weibull"
    assert doc["dataset"] == {"label": "chemo", "n": 45, "source": "bundled"}
    assert list(doc["estimate"]) == list(fit.names)
    assert doc["lr_tests"][0]["null"] == "MO" and doc["lr_tests"][0]["df"] == 1


def test_timestamp_is_optional():
    data = Dataset.bundled()
    cfg = FitConfig(n_starts=2)
    fit = inference.fit_mle(data, "mo", "exponential", cfg)
    doc = FitReport.from_fit(fit, data, cfg).to_dict()
    assert doc["timestamp"].endswith("+00:00")


def test_spec_rebuilt_from_report(report):
    rep, fit = report
    spec = spec_from_report(rep)
    assert spec == fit.spec
    assert inference.loglik(spec, Dataset.bundled()) == pytest.approx(rep.loglik, rel=1e-12)


def test_rejects_unknown_keys_and_schema(report):
    rep, _ = report
    doc = rep.to_dict()
    with pytest.raises(ArgumentError, match="unknown report keys: extra"):
        FitReport.from_dict({**doc, "extra": 1})
    with pytest.raises(ArgumentError, match="unsupported report schema"):
        FitReport.from_dict({**doc, "schema": "other/2"})
    with pytest.raises(ArgumentError, match="not valid JSON"):
        FitReport.from_json("{")
    broken = dict(doc)
    del broken["loglik"]
    with pytest.raises(ArgumentError, match="malformed"):
        FitReport.from_dict(broken)


def test_non_finite_numbers_become_null(report):
    rep, _ = report
    name = next(iter(rep.se))
    odd = FitReport(**{**rep.__dict__, "se": {**rep.se, name: None}})
    json.loads(odd.to_json())
    assert FitReport.from_json(odd.to_json()).se[name] is None


def test_report_requires_baseline_estimates(report):
    rep, _ = report
    est = dict(rep.estimate)
    est.pop("lam")
    with pytest.raises(ArgumentError, match="lacks an estimate for lam"):
        spec_from_report(FitReport(**{**rep.__dict__, "estimate": est}))
