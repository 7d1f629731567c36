import random

import pytest

from holoperc.netmodel import Graph, PercParams, Scenario, Transformation


@pytest.fixture
def rng():
    return random.Random(20240601)


def random_graph(rng, n, p=0.5):
    edges = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1) if rng.random() < p]
    return Graph.from_edges(n, edges)


def random_scenario(rng, n_max=3, monotone=False):
    n = rng.randint(1, n_max)
    g = random_graph(rng, n)
    size = 1 << n
    nf = frozenset(s for s in range(1, size + 1) if rng.random() < 0.3)
    return Scenario(g, PercParams(rng.randint(1, n + 1), rng.randint(1, n + 1)), nf, monotone)


def cycle3():
    return Transformation.from_images([2, 3, 1], "c")


def triangle():
    return Graph.from_edges(3, [(1, 2), (1, 3), (2, 3)])


def path3():
    return Graph.from_edges(3, [(1, 2), (2, 3)])


ACCEPTANCE_LINES = []


@pytest.fixture
def record():
    def _record(name, ok, detail=""):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
