import pytest

from gridpursuit.grid import GridShape

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_line():
    return ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def g3x3():
    return GridShape((3, 3))
