"""Driver that alternates the two phases until the matching is maximum."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .graph import Matching, augment, path_edges
from .guessing import Instrumentation, InstrumentationReport
from .phase1 import NO_AUGMENTING_PATH, run_phase1
from .phase2 import run_phase2


class PhaseLimitExceeded(RuntimeError):
    pass


@dataclass
class PhaseRecord:
    index: int
    matching_before: Matching
    phase1: dict
    saps: list[tuple[int, ...]] = field(default_factory=list)
    phase2_events: list[dict] = field(default_factory=list)
    blossom_cycles: list[tuple] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "matching_before": [list(e) for e in sorted(self.matching_before)],
            "phase1": self.phase1,
            "saps": [list(p) for p in self.saps],
            "phase2_events": self.phase2_events,
        }


@dataclass
class MatchResult:
    matching: Matching
    phase_count: int
    report: InstrumentationReport
    phases: list[PhaseRecord]
    ledger: dict
    guesses: list[dict]

    @property
    def size(self) -> int:
        return len(self.matching)

    def to_dict(self, *, include_logs: bool = True) -> dict:
        out = {
            "matching": [list(e) for e in sorted(self.matching)],
            "size": self.size,
            "phase_count": self.phase_count,
            "report": self.report.to_dict(),
        }
        if include_logs:
            out["phases"] = [p.to_dict() for p in self.phases]
            out["guesses"] = self.guesses
            out["ledger"] = self.ledger
        return out

    def to_json(self, *, include_logs: bool = True) -> str:
        return json.dumps(self.to_dict(include_logs=include_logs), indent=1, sort_keys=True)


def maximum_matching(oracle, model: str | None = None) -> MatchResult:
    """Find a maximum matching of the oracle's hidden graph.

    Each iteration rebuilds the weights from the current matching, runs
    the phase-1 search, stops if it certifies maximality, and otherwise
    augments along the disjoint paths phase 2 extracts.  The oracle's
    ledger is shared by all phases, so no query is ever paid for twice.
    """
    if model is not None and model != oracle.model:
        raise ValueError(f"oracle answers {oracle.model!r} queries, not {model!r}")
    n = oracle.n
    instr = Instrumentation(oracle.model, n)
    oracle.observer = instr
    matching: Matching = frozenset()
    phases: list[PhaseRecord] = []
    limit = n // 2 + 1
    try:
        while True:
            if len(phases) >= limit:
                raise PhaseLimitExceeded(
                    f"{len(phases)} phases on n={n} without terminating; each phase must add an edge"
                )
            k = len(phases)
            p1 = run_phase1(oracle, matching, instr, k)
            rec = PhaseRecord(k, matching, p1.to_dict())
            phases.append(rec)
            if p1.outcome == NO_AUGMENTING_PATH:
                break
            saps, dfs = run_phase2(p1, matching, oracle, instr, k)
            rec.saps = [tuple(p) for p in saps]
            rec.phase2_events = dfs.events
            rec.blossom_cycles = dfs.blossom_cycles
            matching = augment(matching, saps)
    finally:
        oracle.observer = None
    report = instr.report(len(oracle.ledger), len(phases))
    return MatchResult(
        matching=matching,
        phase_count=len(phases),
        report=report,
        phases=phases,
        ledger=oracle.ledger_report(),
        guesses=[r.to_dict() for r in instr.records],
    )


def sap_lengths(result: MatchResult) -> list[int]:
    """Edge count of the paths augmented in each phase (longest per phase)."""
    return [max(len(path_edges(p)) for p in rec.saps) for rec in result.phases if rec.saps]
