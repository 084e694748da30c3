from fractions import Fraction

import pytest

from auxspec import fitkit, tables
from auxspec.numeric_solver import reference_table

_CRITERIA = {}
_OUTCOMES = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): numbered acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            _CRITERIA[item.nodeid] = mark.args


def pytest_runtest_logreport(report):
    if report.nodeid not in _CRITERIA:
        return
    if report.failed:
        _OUTCOMES[report.nodeid] = "FAIL"
    elif report.when == "call" and report.nodeid not in _OUTCOMES:
        _OUTCOMES[report.nodeid] = "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, (number, title) in sorted(_CRITERIA.items(), key=lambda kv: kv[1][0]):
        outcome = _OUTCOMES.get(nodeid, "NOT RUN")
        terminalreporter.write_line(f"criterion {number}: {outcome:7s} {title}")


@pytest.fixture(scope="session")
def fit_reference():
    """Oracle eps(lam, n, l), n, l <= 3, on the fit grid, the chi-table exponents and lam = 2, -1."""
    lambdas = set(fitkit.DEFAULT_FIT_GRID) | {2.0, -1.0}
    lambdas |= {x for x in tables.table1_lambdas() if x != "log"}
    lambdas.discard(0.0)
    return reference_table(sorted(lambdas) + ["log"], 3, 3)
