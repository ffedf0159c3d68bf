"""Phase 2: path-preserving depth-first search for disjoint shortest augmenting paths.

``H`` starts as every tight pair of explored vertices.  A depth-first
search from each free vertex walks ``H``, confirming candidate edges with
the oracle only at the grow/complete guard and the blossom guard.  Edges
and vertices that cannot lie on a yet-undiscovered path are deleted from
``H`` as soon as that is known, and dangling edges are pruned after every
deletion, so that every edge left in ``H`` stays a plausible path edge.

Tightness alone admits walks that wander down one search tree, across,
and back down another.  Each step therefore also has to leave room to
finish: a vertex at position ``q`` of the walk must have an alternating
level (even or odd, as read off the phase-1 duals) of at most ``L - q``,
where ``L`` is the augmenting-path length phase 1 certified.
"""

from __future__ import annotations

import sys
from collections.abc import Iterable, Sequence
from contextlib import contextmanager

import numpy as np

from .graph import AlternatingPath, Edge, edge, path_edges
from .guessing import INCORRECT, PHASE2, GuessContext, Instrumentation
from .oracle import ABSENT, MATRIX
from .phase1 import SAP_FOUND, Phase1Result, SearchInconsistency

CANDIDATE = "candidate"
CONFIRMED = "confirmed"

SITE_GROW = "p2-grow-guard"
SITE_BLOSSOM = "p2-blossom-guard"
SITE_SCAN = "p2-list-scan"

_OUTER, _INNER = 1, 2


class HGraph:
    """Mutable candidate graph over the explored vertices; edges only ever disappear."""

    def __init__(self, vertices: Iterable[int], free: Iterable[int]):
        self.adj: dict[int, set[int]] = {v: set() for v in vertices}
        self.free = frozenset(free)
        self.status: dict[Edge, str] = {}
        self.removed: set[Edge] = set()

    def __contains__(self, v: int) -> bool:
        return v in self.adj

    def add_edge(self, u: int, v: int, status: str = CANDIDATE) -> None:
        e = edge(u, v)
        if e in self.removed:
            raise ValueError(f"edge {e} was removed and cannot be re-inserted")
        self.adj.setdefault(u, set()).add(v)
        self.adj.setdefault(v, set()).add(u)
        self.status[e] = status

    def has_edge(self, u: int, v: int) -> bool:
        return u in self.adj and v in self.adj[u]

    def degree(self, v: int) -> int:
        return len(self.adj.get(v, ()))

    def confirm(self, u: int, v: int) -> None:
        if self.has_edge(u, v):
            self.status[edge(u, v)] = CONFIRMED

    def remove_edge(self, u: int, v: int) -> None:
        if self.has_edge(u, v):
            self.adj[u].discard(v)
            self.adj[v].discard(u)
            e = edge(u, v)
            self.status.pop(e, None)
            self.removed.add(e)

    def remove_vertex(self, v: int) -> list[int]:
        """Delete ``v`` with its edges; returns the former neighbors."""
        if v not in self.adj:
            return []
        nbrs = sorted(self.adj[v])
        for x in nbrs:
            self.remove_edge(v, x)
        del self.adj[v]
        return nbrs

    def edges(self) -> set[Edge]:
        return {edge(u, v) for u, nb in self.adj.items() for v in nb}

    def dangling_vertices(self) -> list[int]:
        return [v for v, nb in self.adj.items() if v not in self.free and len(nb) <= 1]


def remove_dangling(h: HGraph, seeds: Iterable[int] | None = None) -> HGraph:
    """Repeatedly delete non-free vertices of degree at most one, with their edge.

    Free vertices keep their pendant edges.  ``seeds`` limits the initial
    worklist to vertices whose degree may have dropped.
    """
    work = list(h.adj) if seeds is None else [v for v in seeds if v in h]
    while work:
        x = work.pop()
        if x in h.adj and x not in h.free and len(h.adj[x]) <= 1:
            work.extend(h.remove_vertex(x))
    return h


def _join_rounds(n: int, blossoms) -> np.ndarray:
    """Round at which each pair first shared a blossom, or -1."""
    join = np.full((n, n), -1, dtype=np.int64)
    for rec in blossoms:
        idx = np.array(rec.members, dtype=np.int64)
        block = join[np.ix_(idx, idx)]
        block[block < 0] = rec.round
        join[np.ix_(idx, idx)] = block
    return join


def build_H(phase1: Phase1Result, oracle=None) -> HGraph:
    """Every tight pair of explored vertices, pruned of dangling edges.

    Pairs inside a blossom carry the blossom's accumulated dual (two per
    round since it formed), so edges that were tight when the blossom
    closed stay tight.  Pairs the oracle already reported absent are left
    out; pairs it reported present start out confirmed.
    """
    if phase1.outcome != SAP_FOUND:
        raise ValueError("H is only defined after phase 1 found an augmenting path")
    st = phase1.state
    n = st.n
    verts = np.array(st.vertices(), dtype=np.int64)
    h = HGraph(verts.tolist(), st.free_vertices())
    if verts.size == 0:
        return h
    join = _join_rounds(n, st.blossoms)[np.ix_(verts, verts)]
    z = np.where(join >= 0, 2 * (st.round - join), 0)
    y = st.y[verts]
    mate = st.mate[verts]
    w = np.where(mate[:, None] == verts[None, :], 2, 0)
    tight = (y[:, None] + y[None, :] + z) == w
    tight &= np.triu(np.ones_like(tight, dtype=bool), k=1)
    if oracle is not None:
        tight &= oracle.edge_status[np.ix_(verts, verts)] != ABSENT
    for i, j in zip(*np.nonzero(tight)):
        u, v = int(verts[i]), int(verts[j])
        known = oracle is not None and oracle.known_present(u, v)
        h.add_edge(u, v, CONFIRMED if known else CANDIDATE)
    return remove_dangling(h)


def alternating_levels(phase1: Phase1Result) -> dict[int, tuple[int, int]]:
    """(even, odd) alternating distance from the free vertices for each explored vertex.

    The level a vertex was reached at comes from its entry round.  The
    other parity is fixed by the first blossom containing it (closing
    round ``r`` gives even + odd = 2r + 1) and otherwise by the closing
    augmenting edge (even + odd = 2t + 1 for the final round ``t``).
    """
    st = phase1.state
    total = 2 * st.round + 1
    first_join: dict[int, int] = {}
    for rec in st.blossoms:
        for x in rec.members:
            first_join.setdefault(x, rec.round)
    levels: dict[int, tuple[int, int]] = {}
    for v in st.vertices():
        entry = int(st.entry_round[v])
        tenacity = 2 * first_join[v] + 1 if v in first_join else total
        if st.parent[v] >= 0:
            odd = entry + 1
            levels[v] = (tenacity - odd, odd)
        else:
            even = 0 if st.mate[v] < 0 else entry + 2
            levels[v] = (even, tenacity - even)
    return levels


@contextmanager
def _recursion_room(depth: int):
    old = sys.getrecursionlimit()
    if depth > old:
        sys.setrecursionlimit(depth)
    try:
        yield
    finally:
        sys.setrecursionlimit(old)


class PathPreservingDfs:
    """One phase-2 call: DFS from each free vertex over ``h``."""

    def __init__(self, h: HGraph, mate: Sequence[int], oracle, instrumentation: Instrumentation | None = None,
                 levels: dict[int, tuple[int, int]] | None = None, length: int | None = None):
        self.h = h
        self.levels = levels
        self.length = length
        self.mate = list(mate)
        self.oracle = oracle
        self.instr = instrumentation
        self.saps: list[AlternatingPath] = []
        self.used: set[int] = set()
        self.events: list[dict] = []
        self.blossom_cycles: list[tuple[Edge, ...]] = []
        self._reset()

    def _reset(self) -> None:
        self.role: dict[int, int] = {}
        self.label: dict[int, tuple] = {}
        self.parent: dict[int, int] = {}
        self.base: dict[int, int] = {}
        self.members: dict[int, list[int]] = {}
        self.pos: dict[int, int] = {}
        self.skipped = 0  # H-edges passed over because of the current search state
        self.found: AlternatingPath | None = None

    # views used by the guess classifier
    def _in_dfs(self, v: int) -> bool:
        return v in self.role

    def _forms_blossom(self, u: int, v: int) -> bool:
        return self.role.get(v) == _OUTER and self.base[u] != self.base[v]

    def _matched(self, u: int, v: int) -> bool:
        return self.mate[u] == v

    def _is_free(self, v: int) -> bool:
        return self.mate[v] < 0

    def _context(self, site: str, u: int, v: int | None = None) -> GuessContext:
        return GuessContext(
            model=self.oracle.model,
            phase=PHASE2,
            site=site,
            u=u,
            v=v,
            tight=self._usable,
            matched=self._matched,
            in_search=self._in_dfs,
            forms_blossom=self._forms_blossom,
            is_free=self._is_free,
        )

    def _reaches(self, v: int, q: int) -> bool:
        """Can ``v`` at path position ``q`` still end on a free vertex by position ``length``?"""
        if self.levels is None:
            return True
        even, odd = self.levels[v]
        left = self.length - q
        return left >= 0 and (odd if q % 2 == 0 else even) <= left

    def _usable(self, u: int, v: int) -> bool:
        """``uv`` in H and, as a grow or completion step from ``u``, not too long."""
        if not self.h.has_edge(u, v):
            return False
        if v in self.role or self.mate[u] == v:
            return True
        q = self.pos[u] + 1
        if not self._reaches(v, q):
            return False
        return self.mate[v] < 0 or self._reaches(self.mate[v], q + 1)

    def _action(self, u: int, v: int) -> str | None:
        if self.mate[u] == v or not self.h.has_edge(u, v):
            return None
        if v not in self.role:
            if not self._usable(u, v):
                return None
            return "sap" if self.mate[v] < 0 else "grow"
        if self._forms_blossom(u, v):
            return "blossom"
        return None

    def _check(self, res, action: str | None) -> None:
        if res.cached or res.verdict is None:
            return
        if (res.verdict.verdict == INCORRECT) != (action is not None):
            raise SearchInconsistency(
                f"guess {res.verdict.verdict} at {res.verdict.key} disagrees with search action {action!r}"
            )

    def _drop_edge(self, u: int, v: int) -> None:
        self.h.remove_edge(u, v)
        remove_dangling(self.h, (u, v))
        self.events.append({"kind": "remove-edge", "u": u, "v": v})

    def _drop_vertices(self, *vs: int) -> None:
        touched: list[int] = []
        for x in vs:
            touched.extend(self.h.remove_vertex(x))
        remove_dangling(self.h, touched)

    # ---- search -------------------------------------------------------

    def run(self) -> list[AlternatingPath]:
        n = len(self.mate)
        with _recursion_room(8 * n + 1000):
            for f in sorted(v for v in self.h.free if v in self.h):
                if f in self.used or f not in self.h or self.h.degree(f) == 0:
                    continue
                self._reset()
                self.role[f] = _OUTER
                self.label[f] = ("root",)
                self.base[f] = f
                self.members[f] = [f]
                self.pos[f] = 0
                if self._find_ap(f):
                    self._accept(self.found)
        return self.saps

    def _accept(self, path: AlternatingPath) -> None:
        for u, v in path_edges(path):
            # matched edges were confirmed when they entered the matching
            if self.mate[u] != v and not self.oracle.known_present(u, v):
                raise SearchInconsistency(f"sap edge {(u, v)} was never confirmed present")
        if not _alternating(self.mate, path) or self.used.intersection(path):
            raise SearchInconsistency(f"extracted path {path} is not a disjoint augmenting path")
        self.saps.append(path)
        self.used.update(path)
        self.events.append({"kind": "sap", "path": list(path)})
        self._drop_vertices(*path)

    def _candidates(self, u: int):
        """(v, query-result) pairs in scan order; the result is None when no query was needed."""
        if self.oracle.model == MATRIX:
            for v in sorted(self.h.adj.get(u, ())):
                if u not in self.h:
                    return
                action = self._action(u, v)
                if action is None:
                    self._skip(u, v)
                    continue
                site = SITE_BLOSSOM if action == "blossom" else SITE_GROW
                res = self.oracle.query_matrix(u, v, self._context(site, u, v))
                self._check(res, action if res.outcome else None)
                if not res.outcome:
                    self._drop_edge(u, v)
                    continue
                self.h.confirm(u, v)
                yield v, action, res
        else:
            i = 1
            while u in self.h:
                res = self.oracle.query_list(u, i, self._context(SITE_SCAN, u))
                i += 1
                v = res.outcome
                if v is None:
                    self._check(res, "null")
                    return
                action = self._action(u, v)
                self._check(res, action)
                if action is None:
                    self._skip(u, v)
                else:
                    self.h.confirm(u, v)
                    yield v, action, res

    def _skip(self, u: int, v: int) -> None:
        if self.h.has_edge(u, v) and self.mate[u] != v:
            self.skipped += 1

    def _find_ap(self, u: int) -> bool:
        for v, action, res in self._candidates(u):
            # earlier iterations may have changed v's standing
            if self._action(u, v) != action:
                self._skip(u, v)
                continue
            if action == "sap":
                self.role[v] = _INNER
                self.parent[v] = u
                self.found = (v, *self._path(u))
                self._resolve(res, True, v)
                return True
            if action == "grow":
                partner = self.mate[v]
                self.role[v] = _INNER
                self.parent[v] = u
                self.base[v] = v
                self.members[v] = [v]
                self.role[partner] = _OUTER
                self.label[partner] = ("grow", v)
                self.base[partner] = partner
                self.members[partner] = [partner]
                self.pos[partner] = self.pos[u] + 2
                self.events.append({"kind": "grow", "u": u, "v": v, "partner": partner})
                skipped = self.skipped
                found = self._find_ap(partner)
                self._resolve(res, found, v)
                if found:
                    return True
                self.events.append({"kind": "retreat", "v": v, "partner": partner})
                # an edge passed over below may become usable once a blossom
                # forms or from another root; only a clean dead end is deleted
                if self.skipped == skipped:
                    self._drop_vertices(v, partner)
                if u not in self.h:
                    return False
                continue
            if self._blossom(u, v):
                return True
        return False

    def _resolve(self, res, found: bool, v: int) -> None:
        rec = res.verdict
        if self.instr is not None and rec is not None and not res.cached and rec.case == "dfs-grow":
            self.instr.resolve_grow(rec, found and v in (self.found or ()))

    def _base_path(self, b: int) -> list[int]:
        path = [b]
        while self.label[b][0] != "root":
            inner = self.label[b][1]
            b = self.base[self.parent[inner]]
            path.append(b)
        return path

    def _blossom(self, u: int, v: int) -> bool:
        path_u = self._base_path(self.base[u])
        on_u = {b: i for i, b in enumerate(path_u)}
        path_v = [self.base[v]]
        while path_v[-1] not in on_u:
            inner = self.label[path_v[-1]][1]
            path_v.append(self.base[self.parent[inner]])
        lca = path_v[-1]
        cycle: list[Edge] = [edge(u, v)]
        newly: list[int] = []
        absorbed: list[int] = []
        for side, (a, b) in ((path_u[: on_u[lca]], (u, v)), (path_v[:-1], (v, u))):
            side_newly = []
            for base in side:
                inner = self.label[base][1]
                cycle.extend((edge(base, inner), edge(inner, self.parent[inner])))
                self.label[inner] = ("bridge", a, b)
                side_newly.append(inner)
                absorbed.extend((base, inner))
            # each side was collected from the bridge toward the base
            newly.extend(reversed(side_newly))
        for b in absorbed:
            for x in self.members.pop(b):
                self.base[x] = lca
                self.members[lca].append(x)
        for x in newly:
            self.role[x] = _OUTER
        for x in newly:
            self.pos[x] = len(self._path(x)) - 1
        self.blossom_cycles.append(tuple(cycle))
        self.events.append({"kind": "blossom", "u": u, "v": v, "base": lca})
        # explore from the new outer vertices, nearest the base first
        for x in newly:
            if x in self.h and self._find_ap(x):
                return True
        return False

    def _path(self, x: int) -> tuple[int, ...]:
        """Alternating path from outer vertex ``x`` back to the DFS root."""
        cache: dict[int, tuple[int, ...]] = {}

        def walk(x: int) -> tuple[int, ...]:
            if x in cache:
                return cache[x]
            lab = self.label[x]
            if lab[0] == "root":
                out: tuple[int, ...] = (x,)
            elif lab[0] == "grow":
                inner = lab[1]
                out = (x, inner) + walk(self.parent[inner])
            else:
                _, a, b = lab
                pa = walk(a)
                k = pa.index(x)
                out = tuple(reversed(pa[: k + 1])) + walk(b)
            cache[x] = out
            return out

        return walk(x)


def _alternating(mate: Sequence[int], path: Sequence[int]) -> bool:
    if len(path) < 2 or len(path) % 2 or len(set(path)) != len(path):
        return False
    if mate[path[0]] >= 0 or mate[path[-1]] >= 0:
        return False
    return all((mate[path[i]] == path[i + 1]) == (i % 2 == 1) for i in range(len(path) - 1))


def run_phase2(phase1: Phase1Result, matching, oracle, instrumentation: Instrumentation | None = None,
               phase_index: int = 0) -> tuple[list[AlternatingPath], PathPreservingDfs]:
    """Extract vertex-disjoint augmenting paths from the phase-1 tight structure."""
    if phase1.outcome != SAP_FOUND:
        raise ValueError("phase 2 requires a phase-1 result that found an augmenting path")
    if instrumentation is not None:
        instrumentation.begin_call(phase_index, PHASE2)
    h = build_H(phase1, oracle)
    dfs = PathPreservingDfs(h, phase1.state.mate.tolist(), oracle, instrumentation,
                            alternating_levels(phase1), 2 * phase1.state.round + 1)
    saps = dfs.run()
    if not saps:
        raise SearchInconsistency("phase 1 certified an augmenting path but phase 2 found none")
    return saps, dfs
