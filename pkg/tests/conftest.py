import pytest

from specmux.config import build_interference, load_preset


@pytest.fixture(scope="session")
def current_preset():
    return load_preset("current")


@pytest.fixture(scope="session")
def current_interference(current_preset):
    return build_interference(current_preset)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
