from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from ffrt.field_poly import Poly, Ring

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def polys(ring: Ring, max_terms: int = 4, max_exp: int = 3, allow_zero: bool = True):
    """Random polynomials with small support."""
    exps = st.tuples(*[st.integers(0, max_exp)] * ring.nvars)
    coeffs = st.integers(0 if allow_zero else 1, ring.p - 1)
    terms = st.dictionaries(exps, coeffs, max_size=max_terms)
    out = terms.map(lambda t: Poly(ring, t))
    if not allow_zero:
        out = out.filter(lambda f: not f.is_zero())
    return out


# acceptance reporting: one line per criterion in the terminal summary

_RESULTS: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    if report.when == "call" or (report.when == "setup" and report.failed):
        status = "PASS" if report.passed else "FAIL"
        prev = _RESULTS.get(number)
        if prev is None or prev[0] == "PASS":
            _RESULTS[number] = (status, title)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        status, title = _RESULTS[number]
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {title}")
