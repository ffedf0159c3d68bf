"""Adjacency-matrix and adjacency-list query oracles.

An oracle is the only object that can see the hidden graph.  Every
lookup goes through ``query_matrix`` or ``query_list``, which memoize outcomes in a
:class:`QueryLedger` so that a repeated lookup is free and is never scored
as a guess.
"""

from __future__ import annotations

import json
import random
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

import numpy as np

from .graph import Graph, edge

MATRIX = "matrix"
LIST = "list"
MODELS = (MATRIX, LIST)

UNKNOWN, PRESENT, ABSENT = 0, 1, -1

# observer(ctx, key, outcome) -> verdict; invoked on non-cached lookups only
Observer = Callable[[Any, tuple[int, int], Any], Any]


@dataclass(frozen=True)
class QueryResult:
    outcome: Any  # bool in the matrix model, vertex label or None in the list model
    cached: bool
    verdict: Any = None


@dataclass(frozen=True)
class OracleStats:
    T: int
    model: str
    present: int
    absent: int

    def to_dict(self) -> dict:
        return {"T": self.T, "model": self.model, "present": self.present, "absent": self.absent}


class QueryLedger:
    """Ordered record of distinct queries and their outcomes."""

    def __init__(self) -> None:
        self._entries: dict[tuple[int, int], Any] = {}

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, key: tuple[int, int]) -> bool:
        return key in self._entries

    def get(self, key: tuple[int, int]) -> Any:
        return self._entries[key]

    def record(self, key: tuple[int, int], outcome: Any) -> None:
        if key in self._entries:
            raise KeyError(f"query {key} already recorded")
        self._entries[key] = outcome

    def items(self):
        return self._entries.items()

    def to_list(self) -> list[list]:
        return [[list(k), v] for k, v in self._entries.items()]

    def dumps(self) -> str:
        return json.dumps(self.to_list(), separators=(",", ":"))


class HiddenGraph:
    """Ground-truth graph plus a fixed, seeded neighbor order per vertex."""

    def __init__(self, graph: Graph, ordering_seed: int | None = None):
        self.graph = graph
        self.ordering_seed = ordering_seed
        rng = random.Random(ordering_seed)
        orders = []
        for u in range(graph.n):
            nbrs = sorted(graph.adj[u])
            rng.shuffle(nbrs)
            orders.append(tuple(nbrs))
        self.neighbor_order: tuple[tuple[int, ...], ...] = tuple(orders)


class Oracle:
    """Common ledger and bookkeeping shared by both query models."""

    model: str

    def __init__(self, hidden: HiddenGraph):
        self._hidden = hidden
        self.n = hidden.graph.n
        self.ledger = QueryLedger()
        self.observer: Observer | None = None
        # query-free knowledge derived from the ledger, indexed [u, v]
        self.edge_status = np.zeros((self.n, self.n), dtype=np.int8)
        self._present = 0

    def _learn_present(self, u: int, v: int) -> None:
        self.edge_status[u, v] = self.edge_status[v, u] = PRESENT

    def _invoke(self, key: tuple[int, int], outcome: Any, ctx: Any) -> QueryResult:
        self.ledger.record(key, outcome)
        verdict = self.observer(ctx, key, outcome) if self.observer is not None else None
        return QueryResult(outcome, False, verdict)

    def known_present(self, u: int, v: int) -> bool:
        return bool(self.edge_status[u, v] == PRESENT)

    def known_absent(self, u: int, v: int) -> bool:
        return bool(self.edge_status[u, v] == ABSENT)

    def stats(self) -> OracleStats:
        T = len(self.ledger)
        return OracleStats(T=T, model=self.model, present=self._present, absent=T - self._present)

    def ledger_report(self) -> dict:
        return {"model": self.model, "n": self.n, "T": len(self.ledger), "queries": self.ledger.to_list()}


class MatrixOracle(Oracle):
    """``E_M(u, v)``: is ``uv`` an edge?  Keys are unordered pairs."""

    model = MATRIX

    def query_matrix(self, u: int, v: int, ctx: Any = None) -> QueryResult:
        if u == v:
            raise ValueError(f"matrix query needs two distinct vertices, got ({u}, {v})")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"vertex out of range in query ({u}, {v}) for n={self.n}")
        key = edge(u, v)
        if key in self.ledger:
            return QueryResult(self.ledger.get(key), True)
        present = self._hidden.graph.has_edge(u, v)
        if present:
            self._present += 1
            self._learn_present(u, v)
        else:
            self.edge_status[u, v] = self.edge_status[v, u] = ABSENT
        return self._invoke(key, present, ctx)


class ListOracle(Oracle):
    """``E_L(u, i)``: the ``i``-th neighbor of ``u`` (1-based), or ``None``."""

    model = LIST

    def __init__(self, hidden: HiddenGraph):
        super().__init__(hidden)
        self.list_complete = np.zeros(self.n, dtype=bool)

    def query_list(self, u: int, i: int, ctx: Any = None) -> QueryResult:
        if not (0 <= u < self.n):
            raise ValueError(f"vertex {u} out of range for n={self.n}")
        if i < 1:
            raise ValueError(f"list index is 1-based, got {i}")
        key = (u, i)
        if key in self.ledger:
            return QueryResult(self.ledger.get(key), True)
        order = self._hidden.neighbor_order[u]
        outcome = order[i - 1] if i <= len(order) else None
        if outcome is None:
            self._mark_complete(u)
        else:
            self._present += 1
            self._learn_present(u, outcome)
        return self._invoke(key, outcome, ctx)

    def _mark_complete(self, u: int) -> None:
        # every pair not yet seen in u's list is now known to be absent
        self.list_complete[u] = True
        row = self.edge_status[u]
        unseen = row != PRESENT
        unseen[u] = False
        row[unseen] = ABSENT
        self.edge_status[unseen, u] = ABSENT


def build_oracle(g: Graph, model: str, ordering_seed: int = 0) -> MatrixOracle | ListOracle:
    """Fresh oracle over ``g``; the seed only affects list-model neighbor order."""
    if model == MATRIX:
        return MatrixOracle(HiddenGraph(g, None))
    if model == LIST:
        return ListOracle(HiddenGraph(g, ordering_seed))
    raise ValueError(f"unknown query model {model!r}; expected one of {MODELS}")
