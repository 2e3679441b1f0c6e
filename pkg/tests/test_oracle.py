import math
import random

import pytest

from conftest import random_graph
from rismax.graph import Graph
from rismax.oracle import (
    MAX_EXACT_EDGES,
    MAX_RR_ENUM_EDGES,
    OracleSizeError,
    exact_max_coverage,
    exact_opt,
    exact_sigma,
    oracle_report,
    rr_intersection_probabilities,
)
from rismax.rr import RRPrefix, RRSequence
from rismax.select import node_selection


def test_exact_sigma_empty_and_half_edge():
    g = Graph.from_edges(2, [(0, 1, 0.5)])
    assert exact_sigma(g, set()) == 0.0
    assert math.isclose(exact_sigma(g, {0}), 1.5, rel_tol=1e-12)
    assert math.isclose(exact_sigma(g, {1}), 1.0, rel_tol=1e-12)


def test_exact_sigma_full_seed_set_is_n():
    for seed in range(3):
        g = random_graph(random.Random(seed), 7, 12)
        assert math.isclose(exact_sigma(g, range(7)), 7.0, rel_tol=1e-12)


def test_exact_sigma_series_composition():
    g = Graph.from_edges(3, [(0, 1, 0.5), (1, 2, 0.25)])
    # 1 + p01 + p01*p12, by hand
    assert math.isclose(exact_sigma(g, {0}), 1.0 + 0.5 + 0.125, rel_tol=1e-12)


def test_exact_sigma_counts_isolated_seeds():
    g = Graph.from_edges(4, [(0, 1, 0.5)])  # nodes 2, 3 touch no edge
    assert math.isclose(exact_sigma(g, {2}), 1.0, rel_tol=1e-12)
    assert math.isclose(exact_sigma(g, {0, 3}), 2.5, rel_tol=1e-12)


def test_exact_sigma_wide_graph_uses_big_masks():
    # 17 disjoint edges touch 34 nodes, past the 32-bit mask width
    edges = [(2 * i, 2 * i + 1, 0.5) for i in range(17)]
    g = Graph.from_edges(34, edges)
    assert math.isclose(exact_sigma(g, {0}), 1.5, rel_tol=1e-12)
    assert math.isclose(exact_sigma(g, {0, 2, 33}), 4.0, rel_tol=1e-12)


def test_exact_sigma_validation():
    g = Graph.from_edges(2, [(0, 1, 0.5)])
    with pytest.raises(ValueError):
        exact_sigma(g, {5})
    big = Graph.from_edges(30, [(i, i + 1, 0.5) for i in range(MAX_EXACT_EDGES + 1)])
    with pytest.raises(OracleSizeError):
        exact_sigma(big, {0})


def test_exact_opt_examples(line3):
    value, best = exact_opt(line3, 1)
    assert best == (0,) and math.isclose(value, 3.0, rel_tol=1e-12)
    value, best = exact_opt(line3, 3)
    assert best == (0, 1, 2) and math.isclose(value, 3.0, rel_tol=1e-12)


def test_exact_opt_dominates_greedy(rand10):
    opt, _ = exact_opt(rand10, 2)
    prefix = RRSequence(rand10, 5).prefix(400)
    greedy = node_selection(prefix, 2).seeds
    assert opt >= exact_sigma(rand10, greedy) - 1e-12


def test_exact_opt_ties_break_lexicographically():
    # two identical components: sigma({0}) = sigma({2}) = 2, argmax tie
    g = Graph.from_edges(4, [(0, 1, 1.0), (2, 3, 1.0)])
    value, best = exact_opt(g, 1)
    assert math.isclose(value, 2.0, rel_tol=1e-12)
    assert best == (0,)


def test_exact_opt_is_relabel_invariant(rand10):
    perm = list(range(10))
    random.Random(9).shuffle(perm)
    relabeled = Graph.from_edges(
        10, [(perm[u], perm[v], p) for u, v, p in rand10.edges]
    )
    v1, s1 = exact_opt(rand10, 2)
    v2, s2 = exact_opt(relabeled, 2)
    assert math.isclose(v1, v2, rel_tol=1e-12)
    assert math.isclose(v2, exact_sigma(relabeled, [perm[s] for s in s1]), rel_tol=1e-12)


def test_exact_opt_refusals():
    g = random_graph(random.Random(1), 60, 10)
    with pytest.raises(OracleSizeError):
        exact_opt(g, 20)  # C(60,20) too large
    with pytest.raises(ValueError):
        exact_opt(g, 0)


def test_exact_max_coverage_examples():
    single = RRPrefix.from_members([{1, 2}], 4)
    assert exact_max_coverage(single, 1) == (1.0, (1,))
    prefix = RRPrefix.from_members([{0}, {1}, {2}, {0, 1}], 3)
    best, _ = exact_max_coverage(prefix, 3)
    assert best == 1.0
    best2, picks = exact_max_coverage(prefix, 2)
    assert best2 == 0.75 and picks == (0, 1)
    with pytest.raises(ValueError):
        exact_max_coverage(RRPrefix((), 3), 1)


def test_exact_max_coverage_beats_greedy_always():
    rng = random.Random(14)
    for _ in range(30):
        n = rng.randint(2, 8)
        members = [
            {rng.randrange(n) for _ in range(rng.randint(1, 3))}
            for _ in range(rng.randint(1, 12))
        ]
        prefix = RRPrefix.from_members(members, n)
        k = rng.randint(1, n)
        best, _ = exact_max_coverage(prefix, k)
        assert best >= node_selection(prefix, k).coverage - 1e-12


def test_key_relationship_on_one_graph():
    g = random_graph(random.Random(2), 6, 9, 0.2, 0.8)
    seed_sets = [{0}, {1, 3}, {2, 4, 5}]
    probs = rr_intersection_probabilities(g, seed_sets)
    for s, p in zip(seed_sets, probs):
        assert abs(g.n * p - exact_sigma(g, s)) < 1e-9


def test_rr_enum_refuses_large_m():
    g = Graph.from_edges(20, [(i, i + 1, 0.5) for i in range(MAX_RR_ENUM_EDGES + 1)])
    with pytest.raises(OracleSizeError):
        rr_intersection_probabilities(g, [{0}])


def test_oracle_report_bundle(rand10):
    prefix = RRSequence(rand10, 3).prefix(50)
    report = oracle_report(rand10, k=2, seed_sets=[{0}, {1, 2}], prefix=prefix)
    assert set(report.exact_sigma) == {frozenset({0}), frozenset({1, 2})}
    assert report.opt_value >= max(report.exact_sigma.values()) - 1e-12
    assert len(report.opt_set) == 2
    assert 0.0 <= report.coverage_opt <= 1.0


def test_oracle_size_error_is_value_error():
    assert issubclass(OracleSizeError, ValueError)
