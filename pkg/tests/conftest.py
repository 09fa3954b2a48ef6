import time

import pytest

from gmokw import inference
from gmokw.family import Variant
from gmokw.inference import Dataset, FitConfig

# criterion number -> (passed, detail); filled in by test_acceptance
ACCEPTANCE = {}

COMPARED_VARIANTS = (Variant.MO, Variant.KWG, Variant.MOKWG, Variant.GMOKWG)


@pytest.fixture(scope="session")
def chemo():
    return Dataset.bundled()


@pytest.fixture(scope="session")
def comparison_fits(chemo):
    """The four Weibull-baseline fits of the model comparison, default config,
    each timed; nested optima seed the larger models."""
    fits, seconds = {}, {}
    config = FitConfig()
    for v in COMPARED_VARIANTS:
        seeds = [f.spec for f in fits.values() if inference.is_nested(f.variant, v)]
        t0 = time.perf_counter()
        fits[v] = inference.fit_mle(chemo, v, "weibull", config, seeds=seeds)
        seconds[v] = time.perf_counter() - t0
    return fits, seconds


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
