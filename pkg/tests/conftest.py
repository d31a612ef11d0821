import pytest

from qrss import golden
from qrss.gf import FieldCtx

ACCEPTANCE_LINES = []


@pytest.fixture
def ctx7():
    return FieldCtx(7)


@pytest.fixture
def strong():
    return golden.strong_params()


@pytest.fixture
def ogawa():
    return golden.ogawa_params()


@pytest.fixture
def small():
    return golden.small_params()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
