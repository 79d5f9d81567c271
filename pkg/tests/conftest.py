import itertools
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from nbcomplexity.graph import Graph  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def graphs(draw, min_n=1, max_n=6, connected=False):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    edges = [p for p, keep in zip(pairs, chosen) if keep]
    if connected:
        # a random spanning path keeps the graph connected
        order = draw(st.permutations(range(n)))
        edges += [tuple(sorted(e)) for e in zip(order, order[1:])]
    return Graph(n, set(edges))


@st.composite
def graph_and_subset(draw, min_n=1, max_n=6, connected=False):
    g = draw(graphs(min_n, max_n, connected))
    x = draw(st.sets(st.integers(0, g.n - 1), min_size=1))
    return g, frozenset(x)


@pytest.fixture
def p3():
    return Graph(3, [(0, 1), (1, 2)])


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
