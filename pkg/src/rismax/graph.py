"""Directed graph with per-edge activation probabilities.

Edge-list text format (the ingestion contract for every CLI command):
first non-comment line is "n m", followed by m lines "u v" (weighted
cascade) or "u v p" (explicit probabilities). Whitespace separated,
'#' lines are comments. Node ids are dense 0-based integers; ids outside
[0, n) are rejected, never compacted.
"""

from __future__ import annotations

import hashlib
import warnings
from dataclasses import dataclass, field

MODELS = ("wc", "explicit")


class GraphFormatError(ValueError):
    """Malformed edge-list input (carries the offending 1-based line number)."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Graph:
    """Immutable directed graph; safe for concurrent reads.

    `in_adj` is the transpose of the edge list: in_adj[v] lists (u, p) for
    every edge (u, v). `out_adj[u]` lists (v, p) for every edge (u, v).
    """

    n: int
    edges: tuple[tuple[int, int, float], ...]
    out_adj: tuple[tuple[tuple[int, float], ...], ...] = field(repr=False)
    in_adj: tuple[tuple[tuple[int, float], ...], ...] = field(repr=False)
    in_degree: tuple[int, ...] = field(repr=False)

    @property
    def m(self) -> int:
        return len(self.edges)

    @staticmethod
    def from_edges(n: int, edges) -> "Graph":
        if n < 1:
            raise ValueError(f"node count must be >= 1, got {n}")
        edges = tuple((int(u), int(v), float(p)) for u, v, p in edges)
        out_adj = [[] for _ in range(n)]
        in_adj = [[] for _ in range(n)]
        n_loops = 0
        for u, v, p in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) has node id outside [0, {n})")
            if not (0.0 <= p <= 1.0):
                raise ValueError(f"edge ({u},{v}) probability {p} outside [0, 1]")
            if u == v:
                n_loops += 1
            out_adj[u].append((v, p))
            in_adj[v].append((u, p))
        if n_loops:
            warnings.warn(f"graph contains {n_loops} self-loop(s)", stacklevel=2)
        return Graph(
            n=n,
            edges=edges,
            out_adj=tuple(tuple(a) for a in out_adj),
            in_adj=tuple(tuple(a) for a in in_adj),
            in_degree=tuple(len(a) for a in in_adj),
        )

    def digest(self) -> bytes:
        """16-byte hash of (n, edge multiset); used by the RR dump header."""
        h = hashlib.blake2b(digest_size=16)
        h.update(self.n.to_bytes(8, "little"))
        for u, v, p in sorted(self.edges):
            h.update(u.to_bytes(8, "little") + v.to_bytes(8, "little"))
            h.update(repr(p).encode())
        return h.digest()


def transpose_index(g: Graph):
    """Reverse adjacency view: for each v, the (u, p) list of its in-edges."""
    return g.in_adj


def _parse_int(tok: str, what: str, line_no: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise GraphFormatError(f"bad {what} {tok!r}", line_no) from None


def load_graph(path, model: str = "wc") -> Graph:
    """Parse an edge-list file.

    Under model="wc" every edge (u, v) gets p = 1/in_degree(v), overwriting
    any probability column present in the file. Under model="explicit"
    every edge line must carry its own p.
    """
    if model not in MODELS:
        raise ValueError(f"model must be one of {MODELS}, got {model!r}")
    header = None
    raw_edges = []
    with open(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            toks = line.split()
            if header is None:
                if len(toks) != 2:
                    raise GraphFormatError("header must be 'n m'", line_no)
                n = _parse_int(toks[0], "node count", line_no)
                m = _parse_int(toks[1], "edge count", line_no)
                if n < 1 or m < 0:
                    raise GraphFormatError(f"invalid header n={n} m={m}", line_no)
                header = (n, m)
                continue
            if model == "explicit" and len(toks) != 3:
                raise GraphFormatError("explicit model needs 'u v p'", line_no)
            if model == "wc" and len(toks) not in (2, 3):
                raise GraphFormatError("wc model needs 'u v' (optional p ignored)", line_no)
            u = _parse_int(toks[0], "source id", line_no)
            v = _parse_int(toks[1], "target id", line_no)
            if not (0 <= u < header[0] and 0 <= v < header[0]):
                raise GraphFormatError(
                    f"node id outside [0, {header[0]}) in edge ({u},{v})", line_no
                )
            p = 0.0
            if len(toks) == 3:
                try:
                    p = float(toks[2])
                except ValueError:
                    raise GraphFormatError(f"bad probability {toks[2]!r}", line_no) from None
                if model == "explicit" and not (0.0 <= p <= 1.0):
                    raise GraphFormatError(f"probability {p} outside [0, 1]", line_no)
            raw_edges.append((u, v, p, line_no))
    if header is None:
        raise GraphFormatError("empty file (no header line)")
    n, m = header
    if len(raw_edges) != m:
        raise GraphFormatError(f"header declares m={m} edges but file has {len(raw_edges)}")
    if model == "wc":
        indeg = [0] * n
        for _, v, _, _ in raw_edges:
            indeg[v] += 1
        edges = [(u, v, 1.0 / indeg[v]) for u, v, _, _ in raw_edges]
    else:
        edges = [(u, v, p) for u, v, p, _ in raw_edges]
    return Graph.from_edges(n, edges)


def save_graph(g: Graph, path) -> None:
    """Write the explicit edge-list form; load_graph(path, "explicit") round-trips."""
    with open(path, "w") as fh:
        fh.write(f"{g.n} {g.m}\n")
        for u, v, p in g.edges:
            fh.write(f"{u} {v} {p!r}\n")
