"""Forward Monte Carlo estimation of influence spread (evaluation only;
seed selection never uses this path)."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .graph import Graph
from .rng import stream

_MC_STREAM = "mc"


@dataclass(frozen=True)
class SpreadEstimate:
    mean: float
    stderr: float
    runs: int


def simulate_once(g: Graph, seeds, rng) -> int:
    """One independent-cascade run from `seeds`; returns the activated count.
    Each outgoing edge of a newly activated node fires exactly once."""
    active = set(seeds)
    queue = deque(sorted(active))
    out_adj = g.out_adj
    rand = rng.random
    while queue:
        u = queue.popleft()
        for v, p in out_adj[u]:
            if v not in active and rand() < p:
                active.add(v)
                queue.append(v)
    return len(active)


def estimate_spread(g: Graph, seeds, runs: int, seed: int) -> SpreadEstimate:
    """Average activated-set size over `runs` independent simulations.

    Run j draws from its own (seed, j) stream, so any execution order or
    parallel split reproduces the same estimate.
    """
    seeds = frozenset(seeds)
    if any(not (0 <= s < g.n) for s in seeds):
        raise ValueError(f"seed set {sorted(seeds)} not within [0, {g.n})")
    if runs < 1:
        raise ValueError(f"runs must be >= 1, got {runs}")
    if not seeds:
        return SpreadEstimate(mean=0.0, stderr=0.0, runs=runs)
    sizes = [
        simulate_once(g, seeds, stream(seed, _MC_STREAM, j)) for j in range(runs)
    ]
    mean = math.fsum(sizes) / runs
    if runs == 1:
        return SpreadEstimate(mean=mean, stderr=0.0, runs=runs)
    var = math.fsum((s - mean) ** 2 for s in sizes) / (runs - 1)
    return SpreadEstimate(mean=mean, stderr=math.sqrt(var / runs), runs=runs)
