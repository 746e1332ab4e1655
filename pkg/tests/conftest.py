import pytest

from balance_lab import analytic_library


@pytest.fixture(scope="session")
def ex33():
    return analytic_library("example33")


@pytest.fixture(scope="session")
def ex33_unit():
    """Example field on x in [-1, 1] with 4001 nodes."""
    return analytic_library("example33", nx=4001, x_span=(-1.0, 1.0))


@pytest.fixture(scope="session")
def linear_decay():
    return analytic_library("linear_decay")


@pytest.fixture(scope="session")
def uniform_source():
    return analytic_library("uniform_source")


_ACCEPTANCE: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    """Collects one line per acceptance criterion; printed in the terminal summary."""
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
