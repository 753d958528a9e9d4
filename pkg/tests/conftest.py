import math

import pytest
from hypothesis import strategies as st

from netgame.model import GameInstance

EX1_EDGES = [(0, 2), (1, 2), (1, 4), (2, 3), (3, 4)]
EX1_U = math.sqrt(10 / 3)


def ex1_game():
    return GameInstance.create(EX1_EDGES, [1, 2, 3, 4], [1, 1, 1, 1])


def line_game():
    return GameInstance.create([(0, 1), (1, 2)], [1, 2], [1, 1])


def triangle_game():
    return GameInstance.create([(0, 1), (0, 2), (1, 2)], [1, 2], [1, 1])


def star_game():
    return GameInstance.create([(0, 1), (0, 2)], [1, 2], [0.3, 0.4])


@pytest.fixture
def ex1():
    return ex1_game()


@pytest.fixture
def line():
    return line_game()


@pytest.fixture
def triangle():
    return triangle_game()


@pytest.fixture
def star():
    return star_game()


@st.composite
def connected_games(draw, max_n=8, sort_b=False):
    """Random connected instances with distinct b and quadratic costs."""
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n + 1) for v in range(u + 1, n + 1)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    edges = {p for p, keep in zip(pairs, mask) if keep}
    # attach each node to some lower label so the graph is connected
    for u in range(1, n + 1):
        if not any(a < u and (a, u) in edges for a in range(u)):
            edges.add((draw(st.integers(0, u - 1)), u))
    b = draw(st.lists(st.integers(1, 10_000), min_size=n, max_size=n, unique=True))
    if sort_b:
        b.sort()
    d = draw(st.lists(st.floats(0.05, 1.0), min_size=n, max_size=n))
    gamma = draw(st.lists(st.floats(1.0, 3.0), min_size=n, max_size=n))
    return GameInstance.create(sorted(edges), [v / 100 for v in b], d, gamma=gamma)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
