"""Guessing-scheme classification of oracle invocations.

Every non-cached oracle invocation is scored exactly once, through the
oracle's observer hook, as a correct or incorrect guess.  The matrix
scheme always guesses "edge absent".  The list scheme guesses that the
returned neighbor triggers no search step.  Incorrect guesses are further
tagged with the search case they lead to, which is what the per-call caps
are checked against.
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

from .oracle import LIST, MATRIX

CORRECT = "correct"
INCORRECT = "incorrect"

PHASE1 = "phase1"
PHASE2 = "phase2"

PHASE1_CASES = ("grow", "blossom", "sap", "null")
PHASE2_CASES = ("dfs-sap-complete", "dfs-grow-on-sap", "dfs-grow-off-sap", "dfs-blossom", "null")
ALL_CASES = (
    "grow",
    "blossom",
    "sap",
    "null",
    "dfs-grow-on-sap",
    "dfs-grow-off-sap",
    "dfs-sap-complete",
    "dfs-blossom",
)
# provisional tag for a phase-2 grow until its recursion unwinds
DFS_GROW = "dfs-grow"

VertexPred = Callable[[int], bool]
PairPred = Callable[[int, int], bool]


@dataclass(frozen=True)
class GuessContext:
    """Read-only views of the search state at the instant a query is issued.

    ``v`` is known up front for matrix queries; for list queries the
    neighbor is only known from the outcome.
    """

    model: str
    phase: str
    site: str
    u: int
    v: int | None = None
    tight: PairPred | None = None
    same_blossom: PairPred | None = None
    in_search: VertexPred | None = None  # found in S (phase 1) or S' (phase 2)
    is_outer: VertexPred | None = None
    same_tree: PairPred | None = None
    matched: PairPred | None = None
    forms_blossom: PairPred | None = None
    is_free: VertexPred | None = None


def classify_matrix_guess(outcome: bool) -> str:
    return INCORRECT if outcome else CORRECT


def classify_list_guess(ctx: GuessContext, outcome: int | None) -> str:
    if outcome is None:
        return INCORRECT
    u, v = ctx.u, outcome
    if not ctx.tight(u, v):
        return CORRECT
    if ctx.phase == PHASE1:
        hit = not ctx.same_blossom(u, v) and (not ctx.in_search(v) or ctx.is_outer(v))
    else:
        hit = not ctx.matched(u, v) and (not ctx.in_search(v) or ctx.forms_blossom(u, v))
    return INCORRECT if hit else CORRECT


def guess_case(ctx: GuessContext, outcome: Any) -> str:
    """Search case that an incorrect guess leads to."""
    if ctx.model == LIST and outcome is None:
        return "null"
    v = outcome if ctx.model == LIST else ctx.v
    u = ctx.u
    if ctx.phase == PHASE1:
        if not ctx.in_search(v):
            return "grow"
        return "blossom" if ctx.same_tree(u, v) else "sap"
    if not ctx.in_search(v):
        return "dfs-sap-complete" if ctx.is_free(v) else DFS_GROW
    return "dfs-blossom"


def quantum_bound(t: int, i: int) -> float:
    """``sqrt(T * I)`` with constant factor 1."""
    if t < 0 or i < 0:
        raise ValueError("T and I must be non-negative")
    if i > t:
        raise ValueError(f"incorrect guesses ({i}) cannot exceed depth ({t})")
    return math.sqrt(t * i)


@dataclass
class GuessRecord:
    index: int
    phase_index: int
    phase: str
    site: str
    key: tuple[int, int]
    outcome: Any
    verdict: str
    case: str | None

    def to_dict(self) -> dict:
        return {
            "phase_index": self.phase_index,
            "phase": self.phase,
            "site": self.site,
            "key": list(self.key),
            "outcome": self.outcome,
            "guess": self.verdict,
            "case": self.case,
        }


@dataclass
class CallTally:
    phase_index: int
    phase: str
    n: int
    cases: Counter = field(default_factory=Counter)

    @property
    def incorrect(self) -> int:
        return sum(self.cases.values())

    def to_dict(self) -> dict:
        return {
            "phase_index": self.phase_index,
            "phase": self.phase,
            "I": self.incorrect,
            "cases": {k: self.cases[k] for k in sorted(self.cases)},
        }


@dataclass(frozen=True)
class InstrumentationReport:
    model: str
    n: int
    T: int
    I: int
    cases: dict[str, int]
    calls: tuple[CallTally, ...]
    phase_count: int

    @property
    def bound(self) -> float:
        return quantum_bound(self.T, self.I)

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "n": self.n,
            "T": self.T,
            "I": self.I,
            "bound": self.bound,
            "bound_note": "O-estimate sqrt(T*I), constant factor 1",
            "phase_count": self.phase_count,
            "cases": dict(self.cases),
            "calls": [c.to_dict() for c in self.calls],
        }


class Instrumentation:
    """Observer installed on an oracle; owns the run's guess counters."""

    def __init__(self, model: str, n: int):
        if model not in (MATRIX, LIST):
            raise ValueError(f"unknown model {model!r}")
        self.model = model
        self.n = n
        self.records: list[GuessRecord] = []
        self.calls: list[CallTally] = []
        self._current: CallTally | None = None

    def begin_call(self, phase_index: int, phase: str) -> CallTally:
        self._current = CallTally(phase_index, phase, self.n)
        self.calls.append(self._current)
        return self._current

    def __call__(self, ctx: GuessContext, key: tuple[int, int], outcome: Any) -> GuessRecord:
        if self._current is None or ctx.phase != self._current.phase:
            raise RuntimeError(f"query issued outside an open {ctx.phase} call")
        if ctx.model == MATRIX:
            verdict = classify_matrix_guess(outcome)
        else:
            verdict = classify_list_guess(ctx, outcome)
        case = guess_case(ctx, outcome) if verdict == INCORRECT else None
        rec = GuessRecord(len(self.records), self._current.phase_index, ctx.phase, ctx.site, key, outcome, verdict, case)
        self.records.append(rec)
        if case is not None and case != DFS_GROW:
            self._current.cases[case] += 1
        return rec

    def resolve_grow(self, rec: GuessRecord, on_sap: bool) -> None:
        """Finalize a phase-2 grow once its recursion has unwound."""
        if rec.case != DFS_GROW:
            raise RuntimeError(f"record {rec.index} is not a pending grow")
        rec.case = "dfs-grow-on-sap" if on_sap else "dfs-grow-off-sap"
        tally = next(c for c in self.calls if c.phase_index == rec.phase_index and c.phase == rec.phase)
        tally.cases[rec.case] += 1

    def pending(self) -> list[GuessRecord]:
        return [r for r in self.records if r.case == DFS_GROW]

    def report(self, T: int, phase_count: int) -> InstrumentationReport:
        totals = Counter()
        for c in self.calls:
            totals.update(c.cases)
        I = sum(totals.values())
        cases = {k: totals[k] for k in ALL_CASES}
        return InstrumentationReport(self.model, self.n, T, I, cases, tuple(self.calls), phase_count)
