from pathlib import Path

import pytest

from modnet import load_network, StateSet

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load_fixture(name):
    return load_network(FIXTURES / f"{name}.bnet")


def strings(states):
    """Textual form of a StateSet (or of packed ints, given the network size)."""
    return set(states.to_strings())


@pytest.fixture(scope="session")
def cycle4():
    return load_fixture("cycle4")


@pytest.fixture(scope="session")
def const_target():
    return load_fixture("const_target")


@pytest.fixture(scope="session")
def order3():
    return load_fixture("order3")


@pytest.fixture(scope="session")
def sep3():
    return load_fixture("sep3")


@pytest.fixture(scope="session")
def nonsep3():
    return load_fixture("nonsep3")


_acceptance = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "acceptance" in report.keywords:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, duration in _acceptance:
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name}  ({duration:.2f}s)")
