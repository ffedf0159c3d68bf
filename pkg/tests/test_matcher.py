import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmatching.graph import Graph, validate_matching
from qmatching.matcher import PhaseLimitExceeded, maximum_matching, sap_lengths
from qmatching.oracle import LIST, MATRIX, build_oracle
from qmatching.reference import brute_force_max_matching

from .conftest import gnp, graphs, nx_matching_size, petersen


def complete(n):
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


@pytest.mark.parametrize("model", [MATRIX, LIST])
def test_edgeless(model):
    res = maximum_matching(build_oracle(Graph.from_edges(5, []), model))
    assert res.matching == frozenset()
    assert res.phase_count == 1


def test_edgeless_matrix_has_no_incorrect_guesses():
    assert maximum_matching(build_oracle(Graph.from_edges(5, []), MATRIX)).report.I == 0


def test_edgeless_list_counts_only_nulls():
    res = maximum_matching(build_oracle(Graph.from_edges(5, []), LIST))
    assert res.report.I == res.report.cases["null"] == 5


@pytest.mark.parametrize("model", [MATRIX, LIST])
def test_k4(model):
    assert maximum_matching(build_oracle(complete(4), model)).size == 2


@pytest.mark.parametrize("model", [MATRIX, LIST])
def test_petersen(model):
    g = petersen()
    res = maximum_matching(build_oracle(g, model, ordering_seed=3))
    assert res.size == brute_force_max_matching(g).size == 5
    assert validate_matching(g, res.matching)


def test_model_mismatch_rejected(triangle):
    with pytest.raises(ValueError):
        maximum_matching(build_oracle(triangle, MATRIX), model=LIST)


def test_phase_limit(monkeypatch):
    import qmatching.matcher as matcher

    monkeypatch.setattr(matcher, "augment", lambda m, saps: m)
    with pytest.raises(PhaseLimitExceeded):
        maximum_matching(build_oracle(Graph.from_edges(2, [(0, 1)]), MATRIX))


def test_observer_removed_after_run(triangle):
    o = build_oracle(triangle, MATRIX)
    maximum_matching(o)
    assert o.observer is None


def test_json_round_trip():
    res = maximum_matching(build_oracle(petersen(), LIST, ordering_seed=1))
    data = json.loads(res.to_json())
    assert data["size"] == 5
    assert data["report"]["I"] == sum(data["report"]["cases"].values())
    assert len(data["phases"]) == data["phase_count"]
    assert data["ledger"]["T"] == data["report"]["T"]
    assert "phases" not in json.loads(res.to_json(include_logs=False))


def test_golden_path_run(p4):
    # 0-1-2-3: the greedy first phase takes 0-1 and 2-3 at once
    res = maximum_matching(build_oracle(p4, MATRIX))
    assert res.matching == {(0, 1), (2, 3)}
    assert res.phase_count == 2
    assert sap_lengths(res) == [1]
    assert [len(p.saps) for p in res.phases] == [2, 0]


@pytest.mark.parametrize("model", [MATRIX, LIST])
def test_reproducible_bytes(model):
    g = gnp(14, 0.4, 7)
    a = maximum_matching(build_oracle(g, model, ordering_seed=11)).to_json()
    b = maximum_matching(build_oracle(g, model, ordering_seed=11)).to_json()
    assert a == b


@settings(max_examples=100, deadline=None)
@given(graphs(max_n=12), st.sampled_from([MATRIX, LIST]), st.integers(0, 99))
def test_matches_brute_force(g, model, seed):
    res = maximum_matching(build_oracle(g, model, ordering_seed=seed))
    assert validate_matching(g, res.matching)
    assert res.size == brute_force_max_matching(g).size
    sizes = [len(p.matching_before) for p in res.phases]
    assert all(b > a for a, b in zip(sizes, sizes[1:]))
    assert res.report.I <= res.report.T


@pytest.mark.parametrize("n,p,seed", [(40, 0.1, 1), (60, 0.05, 2), (48, 0.5, 3), (80, 0.03, 4)])
@pytest.mark.parametrize("model", [MATRIX, LIST])
def test_matches_networkx_beyond_brute_range(n, p, seed, model):
    g = gnp(n, p, seed)
    res = maximum_matching(build_oracle(g, model, ordering_seed=seed))
    assert validate_matching(g, res.matching)
    assert res.size == nx_matching_size(g)
