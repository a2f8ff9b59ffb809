import pytest

from singplateau import corpus
from singplateau.solver import SolverConfig, solve

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def curves():
    return corpus()


@pytest.fixture(scope="session")
def solved(curves):
    """Depth-5 solves shared across test modules."""
    cache = {}

    def get(name, depth=5):
        key = (name, depth)
        if key not in cache:
            cache[key] = solve(curves[name], SolverConfig(depth=depth))
        return cache[key]

    return get


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line[1])
