"""NodeSelection: greedy k-max-coverage over an RR-set prefix."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .rr import RRPrefix


@dataclass(frozen=True)
class SeedResult:
    """Greedy picks in order, final coverage fraction, per-pick increments."""

    seeds: tuple[int, ...]
    coverage: float
    marginal_gains: tuple[float, ...]


def node_selection(prefix: RRPrefix, k: int) -> SeedResult:
    """Pick, k times, the node covering the most not-yet-covered RR sets.

    Ties (including zero-marginal picks once coverage saturates) go to the
    lowest node id, which makes the result a deterministic function of the
    prefix. k > n is clamped to n with a warning.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    theta = len(prefix)
    if theta == 0:
        raise ValueError("node selection needs a nonempty prefix")
    n = prefix.n
    if k > n:
        warnings.warn(f"k={k} exceeds node count n={n}; clamping to n", stacklevel=2)
        k = n

    # Inverted index: node -> indices of RR sets containing it.
    sets_of: dict[int, list[int]] = {}
    counts = [0] * n
    for idx, r in enumerate(prefix):
        for v in r.members:
            sets_of.setdefault(v, []).append(idx)
            counts[v] += 1

    covered = bytearray(theta)
    selected = [False] * n
    seeds: list[int] = []
    gains: list[float] = []
    covered_total = 0
    for _ in range(k):
        best, best_count = -1, -1
        for v in range(n):
            if not selected[v] and counts[v] > best_count:
                best, best_count = v, counts[v]
        selected[best] = True
        seeds.append(best)
        gains.append(best_count / theta)
        covered_total += best_count
        for idx in sets_of.get(best, ()):
            if not covered[idx]:
                covered[idx] = 1
                for u in prefix[idx].members:
                    counts[u] -= 1
    return SeedResult(
        seeds=tuple(seeds),
        coverage=covered_total / theta,
        marginal_gains=tuple(gains),
    )
