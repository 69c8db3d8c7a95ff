import pytest

from seqcontest import make_linear, make_squared_exponential, make_tullock


@pytest.fixture(scope="session")
def tullock():
    return make_tullock(1.0, 1.0)


@pytest.fixture(scope="session")
def linear():
    return make_linear(1.0, 1.0)


@pytest.fixture(scope="session")
def sqexp():
    return make_squared_exponential(2.0, 1.0)


_ACCEPTANCE: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
