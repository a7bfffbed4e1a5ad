import pytest

from helpers import DATA

from quadcut.model import load_instance


@pytest.fixture
def e1():
    return load_instance(DATA / "e1.qp")


@pytest.fixture
def e2():
    return load_instance(DATA / "e2.qp")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results):
        terminalreporter.write_line(results[key])
