import time

import pytest

from perpsys import pipeline as pl
from perpsys.projective import AmbientSpace

ACCEPTANCE = {}
PROPERTY_RESULTS = {}
SESSION = {}


@pytest.fixture(scope="session")
def space():
    return AmbientSpace(5, 3)


@pytest.fixture(scope="session")
def run(space):
    """The default construction, shared by the whole session."""
    return pl.construct(0, space=space)


def record_acceptance(number, title, passed, detail=""):
    ACCEPTANCE[number] = (title, passed, detail)


def pytest_sessionstart(session):
    SESSION["start"] = time.perf_counter()


def pytest_collection_modifyitems(items):
    # the acceptance suite reads results of the rest of the session, so it runs last
    items.sort(key=lambda it: it.path.name == "test_acceptance.py")


def pytest_runtest_logreport(report):
    if "test_properties.py" not in report.nodeid:
        return
    if report.when == "call" or report.outcome != "passed":
        prev = PROPERTY_RESULTS.get(report.nodeid, "passed")
        PROPERTY_RESULTS[report.nodeid] = report.outcome if prev == "passed" else prev


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, passed, detail = ACCEPTANCE[number]
        mark = "PASS" if passed else "FAIL"
        extra = f"  [{detail}]" if detail else ""
        terminalreporter.write_line(f"{mark}  {number:2d}. {title}{extra}")
