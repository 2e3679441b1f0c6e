"""Reverse-reachable set generation and the fixed-sequence prefix model.

An RRSequence stands for one conceptually infinite i.i.d. draw of RR sets;
set i is a pure function of (master_seed, i, graph), so prefixes behave
like reads from a single fixed sample regardless of materialization order.
"""

from __future__ import annotations

import struct
import threading
from collections import deque
from dataclasses import dataclass

from .graph import Graph
from .rng import check_seed, stream

_RR_STREAM = "rr"
_DUMP_MAGIC = b"RRSQ"
_DUMP_VERSION = 1


@dataclass(frozen=True)
class RRSet:
    """One reverse-reachable set: `members` would, as seeds, activate `root`."""

    root: int
    members: frozenset[int]

    def __post_init__(self):
        if self.root not in self.members:
            raise ValueError("root must be a member of its own RR set")


def sample_rr(g: Graph, rng) -> RRSet:
    """Draw one RR set: uniform root, then reverse BFS flipping each in-edge
    of a dequeued node once (skipped if the neighbor is already reached)."""
    root = rng.randrange(g.n)
    members = {root}
    queue = deque((root,))
    in_adj = g.in_adj
    rand = rng.random
    while queue:
        v = queue.popleft()
        for u, p in in_adj[v]:
            if u not in members and rand() < p:
                members.add(u)
                queue.append(u)
    return RRSet(root=root, members=frozenset(members))


class RRPrefix:
    """The first theta sets of a sequence, plus the node universe size."""

    __slots__ = ("sets", "n")

    def __init__(self, sets, n: int):
        self.sets = tuple(sets)
        self.n = n

    @staticmethod
    def from_members(member_sets, n: int) -> "RRPrefix":
        """Build an ad-hoc prefix from bare member sets (root := min id)."""
        return RRPrefix(
            (RRSet(root=min(s), members=frozenset(s)) for s in member_sets), n
        )

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def __getitem__(self, i):
        return self.sets[i]


class RRSequence:
    """Lazily materialized i.i.d. RR-set sequence with deterministic prefixes.

    Thread-safe: materialization happens under a lock, so a prefix read
    always observes fully generated entries.
    """

    def __init__(self, g: Graph, master_seed: int):
        self.graph = g
        self.master_seed = check_seed(master_seed)
        self._sets: list[RRSet] = []
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._sets)

    @property
    def generated(self) -> tuple[RRSet, ...]:
        return tuple(self._sets)

    def generate_at(self, index: int) -> RRSet:
        """Set number `index` (1-based), independent of any other set."""
        if index < 1:
            raise ValueError(f"RR set index must be >= 1, got {index}")
        return sample_rr(self.graph, stream(self.master_seed, _RR_STREAM, index))

    def prefix(self, theta: int) -> RRPrefix:
        """Materialize up to theta sets and return the first theta of them."""
        if theta < 1:
            raise ValueError(f"prefix length must be >= 1, got {theta}")
        with self._lock:
            while len(self._sets) < theta:
                self._sets.append(self.generate_at(len(self._sets) + 1))
            return RRPrefix(self._sets[:theta], self.graph.n)


def coverage_fraction(prefix: RRPrefix, seeds) -> float:
    """Fraction of RR sets intersecting `seeds`; n * F estimates the spread."""
    if len(prefix) == 0:
        raise ValueError("coverage fraction is undefined on an empty prefix")
    seeds = frozenset(seeds)
    if not seeds:
        return 0.0
    hit = sum(1 for r in prefix if not seeds.isdisjoint(r.members))
    return hit / len(prefix)


def dump_prefix(seq: RRSequence, theta: int, path) -> None:
    """Binary fixture dump of prefix(theta), with a versioned header."""
    prefix = seq.prefix(theta)
    with open(path, "wb") as fh:
        fh.write(_DUMP_MAGIC)
        fh.write(
            struct.pack(
                "<IQ16sQ", _DUMP_VERSION, seq.master_seed, seq.graph.digest(), theta
            )
        )
        for r in prefix:
            members = sorted(r.members)
            fh.write(struct.pack("<II", r.root, len(members)))
            fh.write(struct.pack(f"<{len(members)}I", *members))


def load_prefix(path, g: Graph | None = None):
    """Load a dumped prefix; returns (master_seed, graph_digest, RRPrefix).

    If `g` is given, the stored graph digest must match and the prefix is
    bound to g.n; otherwise n falls back to the largest member id + 1.
    """
    with open(path, "rb") as fh:
        if fh.read(4) != _DUMP_MAGIC:
            raise ValueError(f"{path}: not an RR-prefix dump")
        version, master_seed, graph_digest, theta = struct.unpack(
            "<IQ16sQ", fh.read(struct.calcsize("<IQ16sQ"))
        )
        if version != _DUMP_VERSION:
            raise ValueError(f"{path}: unsupported dump version {version}")
        if g is not None and g.digest() != graph_digest:
            raise ValueError(f"{path}: dump was produced from a different graph")
        sets = []
        for _ in range(theta):
            root, size = struct.unpack("<II", fh.read(8))
            members = struct.unpack(f"<{size}I", fh.read(4 * size))
            sets.append(RRSet(root=root, members=frozenset(members)))
    n = g.n if g is not None else 1 + max(max(r.members) for r in sets)
    return master_seed, graph_digest, RRPrefix(sets, n)
