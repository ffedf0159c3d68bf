"""Exhaustive ground-truth answers for small graphs.

Nothing here touches an oracle or ledger; the only shared code with the
query path is the graph-core types.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import lru_cache

from .graph import Edge, Graph, edge, is_augmenting_path, mate_array

MAX_BRUTE_N = 20
MAX_BRUTE_M = 32
MAX_PATH_N = 20


class InstanceTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class ReferenceAnswer:
    size: int
    witness: frozenset[Edge]
    shortest_augmenting: int | None = None


def brute_force_max_matching(g: Graph) -> ReferenceAnswer:
    """Exact maximum matching by branching on the lowest remaining vertex."""
    if g.n > MAX_BRUTE_N and g.m > MAX_BRUTE_M:
        raise InstanceTooLarge(f"n={g.n}, m={g.m} exceeds the exhaustive search guard")
    nbr_mask = [sum(1 << v for v in g.adj[u]) for u in range(g.n)]

    @lru_cache(maxsize=None)
    def best(mask: int) -> tuple[int, tuple[Edge, ...]]:
        if mask == 0:
            return 0, ()
        u = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << u)
        size, pairs = best(rest)
        cand = nbr_mask[u] & rest
        while cand:
            v = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            s, p = best(rest & ~(1 << v))
            if s + 1 > size:
                size, pairs = s + 1, ((u, v), *p)
        return size, pairs

    size, pairs = best((1 << g.n) - 1)
    return ReferenceAnswer(size, frozenset(edge(*e) for e in pairs))


def shortest_aug_path_length(g: Graph, m: Iterable[Edge], excluded: Iterable[int] = ()) -> int | None:
    """Fewest edges on an augmenting path for ``m`` avoiding ``excluded``, or None.

    Breadth-first over (endpoint, visited-set) states of simple alternating
    paths that start at a free vertex; the first completion is minimal.
    """
    if g.n > MAX_PATH_N:
        raise InstanceTooLarge(f"n={g.n} exceeds the path enumeration guard")
    mate = mate_array(g.n, m)
    banned = 0
    for x in excluded:
        banned |= 1 << x
    frontier = {(f, 1 << f) for f in range(g.n) if mate[f] < 0 and not banned >> f & 1}
    length = 0
    seen = set(frontier)
    while frontier:
        nxt = set()
        for x, visited in frontier:
            for v in g.adj[x]:
                bit = 1 << v
                if (visited | banned) & bit or mate[x] == v:
                    continue
                if mate[v] < 0:
                    return length + 1
                w = mate[v]
                wbit = 1 << w
                if (visited | banned) & wbit:
                    continue
                state = (w, visited | bit | wbit)
                if state not in seen:
                    seen.add(state)
                    nxt.add(state)
        frontier = nxt
        length += 2
    return None


def sap_set_problems(g: Graph, m: Iterable[Edge], p: Sequence[Sequence[int]]) -> list[str]:
    """Reasons why ``p`` is not a maximal set of disjoint shortest augmenting paths."""
    m = frozenset(edge(*e) for e in m)
    problems: list[str] = []
    target = shortest_aug_path_length(g, m)
    used: set[int] = set()
    for path in p:
        if not is_augmenting_path(g, m, path):
            problems.append(f"{tuple(path)} is not augmenting")
        elif len(path) - 1 != target:
            problems.append(f"{tuple(path)} has length {len(path) - 1}, shortest is {target}")
        if used.intersection(path):
            problems.append(f"{tuple(path)} overlaps an earlier path")
        used.update(path)
    if target is not None and shortest_aug_path_length(g, m, used) == target:
        problems.append(f"another disjoint augmenting path of length {target} exists")
    return problems


def check_sap_set(g: Graph, m: Iterable[Edge], p: Sequence[Sequence[int]]) -> bool:
    return not sap_set_problems(g, m, p)
