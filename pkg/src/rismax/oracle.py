"""Exact ground truth on tiny instances by exhaustive enumeration.

Everything here enumerates all 2^m live-edge worlds (and, for the RR-side
check, all roots), so results are exact up to float rounding. Inputs past
the size bounds are refused outright; nothing falls back to approximation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .graph import Graph
from .rr import RRPrefix

MAX_EXACT_EDGES = 20  # 2^m world enumeration
MAX_EXACT_SUBSETS = 10**6  # C(n, k) exhaustion
MAX_RR_ENUM_EDGES = 16  # pure-Python (world x root) enumeration


class OracleSizeError(ValueError):
    """Instance exceeds the exhaustive-enumeration bounds."""


def _check_edges(g: Graph, bound: int) -> None:
    if g.m > bound:
        raise OracleSizeError(
            f"exact enumeration refused: m={g.m} exceeds bound {bound}"
        )


def _check_subsets(n: int, k: int) -> None:
    if not (1 <= k <= n):
        raise ValueError(f"k must be in [1, n={n}], got {k}")
    if math.comb(n, k) > MAX_EXACT_SUBSETS:
        raise OracleSizeError(
            f"exhaustive search refused: C({n},{k}) exceeds {MAX_EXACT_SUBSETS}"
        )


@lru_cache(maxsize=4)
def _world_table(g: Graph):
    """Per-world probabilities and forward-reach bitmasks for every node
    incident to an edge. Nodes without edges reach exactly themselves and
    are handled outside the table."""
    m = g.m
    active = sorted({u for u, v, _ in g.edges} | {v for u, v, _ in g.edges})
    slot = {v: i for i, v in enumerate(active)}
    n_worlds = 1 << m
    worlds = np.arange(n_worlds, dtype=np.uint64)
    live = [((worlds >> np.uint64(j)) & np.uint64(1)).astype(bool) for j in range(m)]

    prob = np.ones(n_worlds)
    for j, (_, _, p) in enumerate(g.edges):
        prob *= np.where(live[j], p, 1.0 - p)

    dtype = np.uint32 if len(active) <= 32 else np.uint64
    reach = np.zeros((n_worlds, max(len(active), 1)), dtype=dtype)
    for v, i in slot.items():
        reach[:, i] = dtype(1) << dtype(i)
    # Fixed-point closure: a live edge (u, v) folds v's reach into u's.
    changed = True
    while changed:
        changed = False
        for j, (u, v, _) in enumerate(g.edges):
            iu, iv = slot[u], slot[v]
            upd = reach[:, iu] | np.where(live[j], reach[:, iv], dtype(0))
            if not np.array_equal(upd, reach[:, iu]):
                reach[:, iu] = upd
                changed = True
    return prob, reach, slot


def exact_sigma(g: Graph, seeds) -> float:
    """Exact influence spread: sum over live-edge worlds of
    Pr{world} * |forward-reachable(seeds, world)|."""
    _check_edges(g, MAX_EXACT_EDGES)
    seeds = frozenset(seeds)
    if any(not (0 <= s < g.n) for s in seeds):
        raise ValueError(f"seed set {sorted(seeds)} not within [0, {g.n})")
    if not seeds:
        return 0.0
    prob, reach, slot = _world_table(g)
    in_table = [s for s in seeds if s in slot]
    isolated = len(seeds) - len(in_table)
    if not in_table:
        return float(isolated)
    mask = reach[:, slot[in_table[0]]].copy()
    for s in in_table[1:]:
        mask |= reach[:, slot[s]]
    counts = np.bitwise_count(mask)
    return float(prob @ counts) + isolated


def exact_opt(g: Graph, k: int) -> tuple[float, tuple[int, ...]]:
    """Exhaustive max of exact_sigma over all k-subsets (lex-smallest argmax)."""
    _check_edges(g, MAX_EXACT_EDGES)
    _check_subsets(g.n, k)
    best_val, best_set = -1.0, None
    for subset in itertools.combinations(range(g.n), k):
        val = exact_sigma(g, subset)
        if val > best_val:
            best_val, best_set = val, subset
    return best_val, best_set


def exact_max_coverage(prefix: RRPrefix, k: int) -> tuple[float, tuple[int, ...]]:
    """Exhaustive max of the coverage fraction over all k-subsets."""
    theta = len(prefix)
    if theta == 0:
        raise ValueError("coverage optimum is undefined on an empty prefix")
    _check_subsets(prefix.n, k)
    node_mask = [0] * prefix.n
    for i, r in enumerate(prefix):
        bit = 1 << i
        for v in r.members:
            node_mask[v] |= bit
    best_val, best_set = -1.0, None
    for subset in itertools.combinations(range(prefix.n), k):
        united = 0
        for v in subset:
            united |= node_mask[v]
        val = united.bit_count() / theta
        if val > best_val:
            best_val, best_set = val, subset
    return best_val, best_set


def rr_intersection_probabilities(g: Graph, seed_sets) -> list[float]:
    """Exact Pr{S intersects a random RR set}, one value per seed set.

    Enumerates every (live-edge world, root) pair and runs a reverse BFS
    from the root, i.e. it follows the RR-set definition directly and
    shares no machinery with exact_sigma. n * result is the spread
    identity's right-hand side.
    """
    _check_edges(g, MAX_RR_ENUM_EDGES)
    seed_sets = [frozenset(s) for s in seed_sets]
    edges = g.edges
    m, n = g.m, g.n
    totals = [0.0] * len(seed_sets)
    for world in range(1 << m):
        p_world = 1.0
        in_live: list[list[int]] = [[] for _ in range(n)]
        for j, (u, v, p) in enumerate(edges):
            if (world >> j) & 1:
                p_world *= p
                in_live[v].append(u)
            else:
                p_world *= 1.0 - p
        if p_world == 0.0:
            continue
        rr_sets = []
        for root in range(n):
            members = {root}
            stack = [root]
            while stack:
                x = stack.pop()
                for u in in_live[x]:
                    if u not in members:
                        members.add(u)
                        stack.append(u)
            rr_sets.append(members)
        for si, s in enumerate(seed_sets):
            hits = sum(1 for r in rr_sets if not s.isdisjoint(r))
            totals[si] += p_world * hits / n
    return totals


@dataclass(frozen=True)
class OracleReport:
    """Bundle of exact answers for one instance (CLI `oracle` output)."""

    exact_sigma: dict[frozenset, float]
    opt_value: float | None
    opt_set: tuple[int, ...] | None
    coverage_opt: float | None


def oracle_report(
    g: Graph, k: int | None = None, seed_sets=(), prefix: RRPrefix | None = None
) -> OracleReport:
    sigma = {frozenset(s): exact_sigma(g, s) for s in seed_sets}
    opt_value = opt_set = cov = None
    if k is not None:
        opt_value, opt_set = exact_opt(g, k)
        if prefix is not None:
            cov, _ = exact_max_coverage(prefix, k)
    return OracleReport(sigma, opt_value, opt_set, cov)
