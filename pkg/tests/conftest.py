import random

import pytest
from hypothesis import HealthCheck, settings

from rismax.graph import Graph

settings.register_profile(
    "suite",
    derandomize=True,
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

# one line per acceptance criterion, shown after the run
acceptance_lines: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)


def random_graph(rng: random.Random, n: int, m: int, p_lo=0.1, p_hi=0.9) -> Graph:
    """Random simple directed graph with m distinct non-loop edges."""
    if m > n * (n - 1):
        raise ValueError(f"cannot place {m} simple edges on {n} nodes")
    edges, seen = [], set()
    while len(edges) < m:
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v and (u, v) not in seen:
            seen.add((u, v))
            edges.append((u, v, rng.uniform(p_lo, p_hi)))
    return Graph.from_edges(n, edges)


def _two_hub_graph(hub_p: float, noise_p: float = 0.15) -> Graph:
    edges = [(0, v, hub_p) for v in (1, 2, 3, 4, 5, 6)]
    edges += [(8, v, hub_p) for v in (9, 10, 11, 12, 13, 14)]
    edges += [(u, v, noise_p)
              for u, v in ((1, 2), (3, 4), (9, 10), (11, 12), (5, 13), (6, 14))]
    return Graph.from_edges(16, edges)


@pytest.fixture(scope="session")
def accept16() -> Graph:
    """16 nodes, 18 edges, a dominant 2-seed optimum {0, 8}: the sampling
    check clears at i=1 and every variant recovers the optimum."""
    return _two_hub_graph(hub_p=0.9)


@pytest.fixture(scope="session")
def probe16() -> Graph:
    """Same shape with weaker hubs: n*F at theta_1 straddles the i=1
    threshold, so roughly half the runs reach iteration 2."""
    return _two_hub_graph(hub_p=0.76)


@pytest.fixture(scope="session")
def rand10() -> Graph:
    return random_graph(random.Random(7), 10, 14, 0.3, 0.5)


@pytest.fixture(scope="session")
def line3() -> Graph:
    return Graph.from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)])


@pytest.fixture(scope="session")
def accept16_path(accept16, tmp_path_factory) -> str:
    from rismax.graph import save_graph

    path = tmp_path_factory.mktemp("graphs") / "accept16.txt"
    save_graph(accept16, path)
    return str(path)


@pytest.fixture(scope="session")
def probe16_path(probe16, tmp_path_factory) -> str:
    from rismax.graph import save_graph

    path = tmp_path_factory.mktemp("graphs") / "probe16.txt"
    save_graph(probe16, path)
    return str(path)
