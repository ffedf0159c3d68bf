"""Query-free graph, matching and alternating-path helpers.

Vertices are dense integer labels ``0..n-1``.  An edge is stored as the
normalized pair ``(min, max)`` so that set membership and iteration order
are deterministic.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

Edge = tuple[int, int]
Matching = frozenset[Edge]
AlternatingPath = tuple[int, ...]


def edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on ``n`` vertices."""

    n: int
    edges: frozenset[Edge]
    adj: tuple[frozenset[int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError(f"vertex count must be non-negative, got {self.n}")
        nbrs: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < v < self.n):
                raise ValueError(f"edge {(u, v)} is not normalized or out of range for n={self.n}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        object.__setattr__(self, "adj", tuple(frozenset(s) for s in nbrs))

    @classmethod
    def from_edges(cls, n: int, pairs: Iterable[tuple[int, int]]) -> Graph:
        """Build a graph, normalizing pairs and rejecting duplicates."""
        seen: set[Edge] = set()
        for u, v in pairs:
            e = edge(int(u), int(v))
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
        return cls(n, frozenset(seen))

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return edge(u, v) in self.edges

    def degree(self, u: int) -> int:
        return len(self.adj[u])

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)


def symmetric_difference(a: Iterable[Edge], b: Iterable[Edge]) -> frozenset[Edge]:
    """Edges present in exactly one of ``a`` and ``b``."""
    return frozenset(edge(*e) for e in a) ^ frozenset(edge(*e) for e in b)


def path_edges(path: Sequence[int]) -> list[Edge]:
    return [edge(path[i], path[i + 1]) for i in range(len(path) - 1)]


def matched_vertices(m: Iterable[Edge]) -> set[int]:
    return {x for e in m for x in e}


def mate_array(n: int, m: Iterable[Edge]) -> list[int]:
    """Partner of each vertex under ``m``, or -1 when free."""
    mate = [-1] * n
    for u, v in m:
        mate[u] = v
        mate[v] = u
    return mate


def is_matching(m: Iterable[Edge]) -> bool:
    endpoints = [x for e in m for x in e]
    return len(endpoints) == len(set(endpoints))


def validate_matching(g: Graph, m: Iterable[Edge]) -> bool:
    """True iff every edge of ``m`` is in ``g`` and no two share a vertex."""
    m = list(m)
    return all(g.has_edge(*e) for e in m) and is_matching(m)


def _alternates(m: frozenset[Edge], path: Sequence[int]) -> bool:
    if len(path) < 2 or len(path) % 2 != 0:
        return False
    if len(set(path)) != len(path):
        return False
    for i, e in enumerate(path_edges(path)):
        # even positions unmatched, odd positions matched
        if (e in m) != (i % 2 == 1):
            return False
    covered = matched_vertices(m)
    return path[0] not in covered and path[-1] not in covered


def is_augmenting_path(g: Graph, m: Iterable[Edge], p: Sequence[int]) -> bool:
    """Free endpoints, alternating edges starting and ending unmatched, all in ``g``."""
    if any(not (0 <= x < g.n) for x in p):
        return False
    if not all(g.has_edge(*e) for e in path_edges(p)):
        return False
    return _alternates(frozenset(edge(*e) for e in m), p)


def augment(m: Iterable[Edge], saps: Iterable[Sequence[int]]) -> Matching:
    """Flip ``m`` along vertex-disjoint augmenting paths.

    Raises ``ValueError`` when the paths overlap or one of them is not
    augmenting with respect to ``m``; both indicate a caller bug.
    """
    m = frozenset(edge(*e) for e in m)
    saps = [tuple(p) for p in saps]
    seen: set[int] = set()
    for p in saps:
        if not _alternates(m, p):
            raise ValueError(f"path {p} is not augmenting for the matching")
        if seen.intersection(p):
            raise ValueError(f"path {p} shares a vertex with another path")
        seen.update(p)
    flipped: frozenset[Edge] = m
    for p in saps:
        flipped = symmetric_difference(flipped, path_edges(p))
    return flipped


def parse_edge_list(text: str) -> Graph:
    """Parse ``"n m"`` followed by ``m`` lines of ``"u v"`` (0-based)."""
    lines = [ln.split() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln[0].startswith("#")]
    if not lines or len(lines[0]) != 2:
        raise ValueError("edge list must start with a header line 'n m'")
    n, m = (int(x) for x in lines[0])
    body = lines[1:]
    if len(body) != m:
        raise ValueError(f"header announces {m} edges but {len(body)} follow")
    pairs = []
    for ln in body:
        if len(ln) != 2:
            raise ValueError(f"malformed edge line: {' '.join(ln)!r}")
        pairs.append((int(ln[0]), int(ln[1])))
    return Graph.from_edges(n, pairs)


def format_edge_list(g: Graph) -> str:
    out = [f"{g.n} {g.m}"]
    out.extend(f"{u} {v}" for u, v in g.sorted_edges())
    return "\n".join(out) + "\n"


def read_edge_list(path: str | Path) -> Graph:
    return parse_edge_list(Path(path).read_text())


def write_edge_list(g: Graph, path: str | Path) -> None:
    Path(path).write_text(format_edge_list(g))
