"""Phase 1: breadth-first search for the tight structure of shortest augmenting paths.

The search grows alternating trees from every free vertex, one dual
"round" at a time.  A pair is eligible when ``u`` is outer, ``u`` and ``v``
lie in different blossoms, and the pair is tight under the current duals.
The oracle is consulted only at the two guard points: ``v`` not yet in
``S`` (grow) and ``v`` outer (blossom or augmenting path).  When a round
produces no further step the duals are adjusted; when no adjustment can
ever make another pair eligible the matching is maximum.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field

import numpy as np

from .graph import Edge, edge, mate_array
from .guessing import INCORRECT, PHASE1, GuessContext, Instrumentation
from .oracle import ABSENT, MATRIX

UNREACHED, OUTER, INNER = 0, 1, 2
ROLE_NAMES = {UNREACHED: "unreached", OUTER: "outer", INNER: "inner"}

SAP_FOUND = "sap-found"
NO_AUGMENTING_PATH = "no-augmenting-path"
ADJUSTED = "adjusted"
EXHAUSTED = "exhausted"

SITE_GROW = "p1-grow-guard"
SITE_OUTER = "p1-outer-guard"
SITE_SCAN = "p1-list-scan"


class SearchInconsistency(RuntimeError):
    """Internal invariant of a search was violated."""


class WeightFn:
    """``w(u, v) = 2`` for a matched pair, ``0`` otherwise."""

    def __init__(self, mate: Iterable[int]):
        self.mate = list(mate)

    def __call__(self, u: int, v: int) -> int:
        return 2 if self.mate[u] == v else 0


def tight(u: int, v: int, y, w: WeightFn) -> bool:
    return int(y[u]) + int(y[v]) == w(u, v)


@dataclass(frozen=True)
class BlossomRecord:
    round: int
    base: int
    members: tuple[int, ...]
    cycle: tuple[Edge, ...]
    matched: int

    def to_dict(self) -> dict:
        return {
            "round": self.round,
            "base": self.base,
            "members": list(self.members),
            "cycle": [list(e) for e in self.cycle],
            "matched": self.matched,
        }


class SearchState:
    """Explored subgraph ``S``, duals, roles and the blossom partition."""

    def __init__(self, n: int, matching: Iterable[Edge]):
        self.n = n
        self.matching = frozenset(edge(*e) for e in matching)
        self.mate = np.array(mate_array(n, self.matching), dtype=np.int64)
        self.w = WeightFn(self.mate.tolist())
        self.y = np.zeros(n, dtype=np.int64)
        self.role = np.zeros(n, dtype=np.int8)
        self.blossom = np.arange(n, dtype=np.int64)  # B_v, the base of v's blossom
        self.members: dict[int, list[int]] = {v: [v] for v in range(n)}
        self.root = np.full(n, -1, dtype=np.int64)
        self.parent = np.full(n, -1, dtype=np.int64)  # inner vertex -> outer vertex that grew it
        self.entry_round = np.full(n, -1, dtype=np.int64)
        self.outer_order: list[int] = []
        self.round = 0
        self.blossoms: list[BlossomRecord] = []
        self.edges: set[Edge] = set()
        for v in range(n):
            if self.mate[v] < 0:
                self.role[v] = OUTER
                self.root[v] = v
                self.entry_round[v] = 0
                self.outer_order.append(v)

    def in_s(self, v: int) -> bool:
        return self.role[v] != UNREACHED

    def is_outer(self, v: int) -> bool:
        return self.role[v] == OUTER

    def same_blossom(self, u: int, v: int) -> bool:
        return self.blossom[u] == self.blossom[v]

    def same_tree(self, u: int, v: int) -> bool:
        return self.root[u] == self.root[v]

    def tight(self, u: int, v: int) -> bool:
        return tight(u, v, self.y, self.w)

    def vertices(self) -> list[int]:
        return np.flatnonzero(self.role != UNREACHED).tolist()

    def free_vertices(self) -> list[int]:
        return np.flatnonzero(self.mate < 0).tolist()

    def roles(self) -> dict[int, str]:
        return {v: ROLE_NAMES[int(self.role[v])] for v in range(self.n)}

    def blossom_classes(self) -> int:
        return len(self.members)


@dataclass
class Phase1Result:
    outcome: str
    state: SearchState
    sap_edge: Edge | None = None
    events: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "outcome": self.outcome,
            "sap_edge": list(self.sap_edge) if self.sap_edge else None,
            "rounds": self.state.round,
            "explored": self.state.vertices(),
            "blossoms": [b.to_dict() for b in self.state.blossoms],
            "events": self.events,
        }


def _context(state: SearchState, model: str, site: str, u: int, v: int | None = None) -> GuessContext:
    return GuessContext(
        model=model,
        phase=PHASE1,
        site=site,
        u=u,
        v=v,
        tight=state.tight,
        same_blossom=state.same_blossom,
        in_search=state.in_s,
        is_outer=state.is_outer,
        same_tree=state.same_tree,
    )


def _grow(state: SearchState, u: int, v: int, events: list[dict]) -> None:
    partner = int(state.mate[v])
    if partner < 0:
        raise SearchInconsistency(f"grow target {v} has no matched partner")
    r = state.round
    state.role[v] = INNER
    state.parent[v] = u
    state.root[v] = state.root[u]
    state.entry_round[v] = r
    state.role[partner] = OUTER
    # the matched edge enters S tight
    state.y[partner] = state.w(v, partner) - state.y[v]
    state.root[partner] = state.root[u]
    state.entry_round[partner] = r
    state.outer_order.append(partner)
    state.edges.update((edge(u, v), edge(v, partner)))
    events.append({"kind": "grow", "round": r, "u": u, "v": v, "partner": partner})


def _base_path(state: SearchState, b: int) -> list[int]:
    """Blossom bases from ``b`` up to its tree root."""
    path = [b]
    while state.mate[b] >= 0:
        inner = int(state.mate[b])
        b = int(state.blossom[state.parent[inner]])
        path.append(b)
    return path


def _blossom(state: SearchState, u: int, v: int, events: list[dict]) -> None:
    path_u = _base_path(state, int(state.blossom[u]))
    on_u = {b: i for i, b in enumerate(path_u)}
    path_v = [int(state.blossom[v])]
    while path_v[-1] not in on_u:
        inner = int(state.mate[path_v[-1]])
        path_v.append(int(state.blossom[state.parent[inner]]))
    lca = path_v[-1]
    sides = (path_u[: on_u[lca]], path_v[:-1])

    cycle: list[Edge] = [edge(u, v)]
    newly_outer: list[int] = []
    absorbed: list[int] = []
    for side in sides:
        for b in side:
            inner = int(state.mate[b])
            grower = int(state.parent[inner])
            cycle.extend((edge(b, inner), edge(inner, grower)))
            newly_outer.append(inner)
            absorbed.extend((b, inner))
    for b in absorbed:
        for x in state.members.pop(b):
            state.blossom[x] = lca
            state.members[lca].append(x)
    for x in newly_outer:
        state.role[x] = OUTER
        state.outer_order.append(x)
    state.edges.add(edge(u, v))
    matched = sum(1 for e in cycle if e in state.matching)
    rec = BlossomRecord(state.round, lca, tuple(sorted(state.members[lca])), tuple(cycle), matched)
    state.blossoms.append(rec)
    events.append({"kind": "blossom", "round": state.round, "u": u, "v": v, "base": lca, "size": len(rec.members)})


def _check_verdict(res, action: str | None) -> None:
    if res.cached or res.verdict is None:
        return
    if (res.verdict.verdict == INCORRECT) != (action is not None):
        raise SearchInconsistency(
            f"guess {res.verdict.verdict} at {res.verdict.key} disagrees with search action {action!r}"
        )


def _scan_matrix(state: SearchState, oracle, u: int, events: list[dict]) -> Edge | None:
    y, role, blossom = state.y, state.role, state.blossom
    mask = (y == -y[u]) & (blossom != blossom[u]) & (role != INNER) & (oracle.edge_status[u] != ABSENT)
    for v in np.flatnonzero(mask).tolist():
        # earlier steps in this scan may have changed v's standing
        if role[v] == INNER or blossom[v] == blossom[u] or not state.tight(u, v):
            continue
        if role[v] == UNREACHED:
            res = oracle.query_matrix(u, v, _context(state, MATRIX, SITE_GROW, u, v))
            _check_verdict(res, "grow" if res.outcome else None)
            if res.outcome:
                _grow(state, u, v, events)
        else:
            res = oracle.query_matrix(u, v, _context(state, MATRIX, SITE_OUTER, u, v))
            if not res.outcome:
                _check_verdict(res, None)
            elif state.same_tree(u, v):
                _check_verdict(res, "blossom")
                _blossom(state, u, v, events)
            else:
                _check_verdict(res, "sap")
                events.append({"kind": "sap", "round": state.round, "u": u, "v": v})
                return edge(u, v)
    return None


def _scan_list(state: SearchState, oracle, u: int, events: list[dict]) -> Edge | None:
    i = 1
    while True:
        res = oracle.query_list(u, i, _context(state, oracle.model, SITE_SCAN, u))
        i += 1
        v = res.outcome
        if v is None:
            _check_verdict(res, "null")
            return None
        action = None
        if state.tight(u, v) and not state.same_blossom(u, v):
            if state.role[v] == UNREACHED:
                action = "grow"
            elif state.role[v] == OUTER:
                action = "blossom" if state.same_tree(u, v) else "sap"
        _check_verdict(res, action)
        if action == "grow":
            _grow(state, u, v, events)
        elif action == "blossom":
            _blossom(state, u, v, events)
        elif action == "sap":
            events.append({"kind": "sap", "round": state.round, "u": u, "v": v})
            return edge(u, v)


def dual_adjustment(state: SearchState, edge_status: np.ndarray) -> str:
    """Advance the duals by one round, or report that nothing can become eligible.

    Outer vertices lose 1 and inner vertices gain 1.  A pair can still
    become eligible only if it is not known to be absent and its dual sum
    is still above the tight value.
    """
    outer = np.flatnonzero(state.role == OUTER)
    if outer.size == 0:
        return EXHAUSTED
    y, role = state.y, state.role
    yo = y[outer][:, None]
    open_pair = edge_status[outer] != ABSENT
    future_grow = (role == UNREACHED)[None, :] & (yo > 0)
    future_outer = (
        (role == OUTER)[None, :]
        & (state.blossom[outer][:, None] != state.blossom[None, :])
        & (yo + y[None, :] > 0)
    )
    if not (open_pair & (future_grow | future_outer)).any():
        return EXHAUSTED
    state.round += 1
    y[role == OUTER] -= 1
    y[role == INNER] += 1
    return ADJUSTED


def run_phase1(oracle, matching: Iterable[Edge], instrumentation: Instrumentation | None = None,
               phase_index: int = 0) -> Phase1Result:
    """Search for the tight structure of ``matching``'s shortest augmenting paths.

    Halts with ``sap-found`` at the first confirmed edge joining two
    different search trees, or with ``no-augmenting-path`` once the duals
    are exhausted.
    """
    state = SearchState(oracle.n, matching)
    if instrumentation is not None:
        instrumentation.begin_call(phase_index, PHASE1)
    scan = _scan_matrix if oracle.model == MATRIX else _scan_list
    events: list[dict] = []
    while True:
        i = 0
        while i < len(state.outer_order):
            u = state.outer_order[i]
            i += 1
            sap = scan(state, oracle, u, events)
            if sap is not None:
                return Phase1Result(SAP_FOUND, state, sap, events)
        if dual_adjustment(state, oracle.edge_status) == EXHAUSTED:
            return Phase1Result(NO_AUGMENTING_PATH, state, None, events)
