import pytest

from gigdigraph import GridDims, Labeling, LatticePath

# rows top to bottom, as drawn in the 3x3 worked example
FIG1_ROWS = [[2, 9, 5], [4, 7, 3], [6, 1, 8]]

# three shortest routes from (4,1) to (1,4) in a 5x5 grid
P1 = LatticePath([(4, 1), (4, 2), (4, 3), (4, 4), (3, 4), (2, 4), (1, 4)])
P2 = LatticePath([(4, 1), (4, 2), (4, 3), (3, 3), (3, 4), (2, 4), (1, 4)])
P3 = LatticePath([(4, 1), (4, 2), (3, 2), (3, 3), (3, 4), (2, 4), (1, 4)])

ACCEPTANCE_LINES = []


@pytest.fixture
def fig1():
    return Labeling.from_rows(FIG1_ROWS)


@pytest.fixture
def g3():
    return GridDims(3, 3)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
