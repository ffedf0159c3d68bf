import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qmatching.graph import Graph
from qmatching.guessing import (
    CORRECT,
    INCORRECT,
    PHASE1,
    PHASE2,
    GuessContext,
    Instrumentation,
    classify_list_guess,
    classify_matrix_guess,
    guess_case,
    quantum_bound,
)
from qmatching.oracle import LIST, MATRIX, build_oracle


def ctx1(**kw):
    base = dict(
        model=LIST,
        phase=PHASE1,
        site="test",
        u=0,
        tight=lambda u, v: True,
        same_blossom=lambda u, v: False,
        in_search=lambda v: False,
        is_outer=lambda v: False,
        same_tree=lambda u, v: False,
    )
    base.update(kw)
    return GuessContext(**base)


def ctx2(**kw):
    base = dict(
        model=LIST,
        phase=PHASE2,
        site="test",
        u=0,
        tight=lambda u, v: True,
        matched=lambda u, v: False,
        in_search=lambda v: False,
        forms_blossom=lambda u, v: False,
        is_free=lambda v: False,
    )
    base.update(kw)
    return GuessContext(**base)


def test_matrix_scheme():
    assert classify_matrix_guess(False) == CORRECT
    assert classify_matrix_guess(True) == INCORRECT


def test_cached_repeat_not_classified():
    instr = Instrumentation(MATRIX, 2)
    instr.begin_call(0, PHASE1)
    o = build_oracle(Graph.from_edges(2, [(0, 1)]), MATRIX)
    o.observer = instr
    ctx = GuessContext(MATRIX, PHASE1, "test", 0, 1, in_search=lambda v: False)
    o.query_matrix(0, 1, ctx)
    o.query_matrix(0, 1, ctx)
    assert len(instr.records) == 1


def test_list_null_is_incorrect():
    assert classify_list_guess(ctx1(), None) == INCORRECT
    assert classify_list_guess(ctx2(), None) == INCORRECT


def test_list_phase1_cases():
    assert classify_list_guess(ctx1(), 3) == INCORRECT
    assert classify_list_guess(ctx1(tight=lambda u, v: False), 3) == CORRECT
    assert classify_list_guess(ctx1(same_blossom=lambda u, v: True), 3) == CORRECT
    # v explored and inner: no step
    assert classify_list_guess(ctx1(in_search=lambda v: True), 3) == CORRECT
    assert classify_list_guess(ctx1(in_search=lambda v: True, is_outer=lambda v: True), 3) == INCORRECT


def test_list_phase2_cases():
    assert classify_list_guess(ctx2(), 3) == INCORRECT
    assert classify_list_guess(ctx2(matched=lambda u, v: True), 3) == CORRECT
    assert classify_list_guess(ctx2(in_search=lambda v: True), 3) == CORRECT
    assert classify_list_guess(ctx2(in_search=lambda v: True, forms_blossom=lambda u, v: True), 3) == INCORRECT


def test_guess_case_tags():
    assert guess_case(ctx1(), None) == "null"
    assert guess_case(ctx1(), 3) == "grow"
    assert guess_case(ctx1(in_search=lambda v: True, same_tree=lambda u, v: True), 3) == "blossom"
    assert guess_case(ctx1(in_search=lambda v: True), 3) == "sap"
    assert guess_case(ctx2(is_free=lambda v: True), 3) == "dfs-sap-complete"
    assert guess_case(ctx2(in_search=lambda v: True), 3) == "dfs-blossom"


def test_quantum_bound_values():
    n = 16
    assert quantum_bound(n**2, round(n**1.5)) == pytest.approx(n**1.75)
    assert quantum_bound(4, 1) == 2.0
    assert quantum_bound(0, 0) == 0.0
    m = 100
    assert quantum_bound(m, 64) == pytest.approx(n**0.75 * math.sqrt(m))


def test_quantum_bound_rejects():
    with pytest.raises(ValueError):
        quantum_bound(1, 2)
    with pytest.raises(ValueError):
        quantum_bound(-1, 0)


def test_resolve_grow_requires_pending():
    instr = Instrumentation(LIST, 4)
    instr.begin_call(0, PHASE1)
    rec = instr(ctx1(), (0, 1), 3)
    with pytest.raises(RuntimeError):
        instr.resolve_grow(rec, True)


def test_query_outside_call_rejected():
    instr = Instrumentation(LIST, 4)
    with pytest.raises(RuntimeError):
        instr(ctx1(), (0, 1), 3)


def test_report_sums_cases():
    instr = Instrumentation(LIST, 4)
    instr.begin_call(0, PHASE1)
    instr(ctx1(), (0, 1), 3)
    instr(ctx1(), (0, 2), None)
    instr(ctx1(tight=lambda u, v: False), (0, 3), 2)
    rep = instr.report(T=3, phase_count=1)
    assert rep.I == 2 == sum(rep.cases.values())
    assert rep.cases["grow"] == 1 and rep.cases["null"] == 1
    assert rep.bound == pytest.approx(math.sqrt(6))


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_bound_is_geometric_mean(t, i):
    if i > t:
        with pytest.raises(ValueError):
            quantum_bound(t, i)
    else:
        b = quantum_bound(t, i)
        assert i <= b <= t or t == 0
        assert b * b == pytest.approx(t * i)
