import pytest
from hypothesis import given
from hypothesis import strategies as st

from qmatching.graph import Graph
from qmatching.oracle import ABSENT, LIST, MATRIX, PRESENT, UNKNOWN, HiddenGraph, build_oracle

from .conftest import graphs


def test_matrix_query_counts_distinct_pairs():
    o = build_oracle(Graph.from_edges(3, [(0, 1)]), MATRIX)
    assert o.stats().T == 0
    r = o.query_matrix(0, 1)
    assert r.outcome is True and not r.cached
    assert o.stats().T == 1
    r = o.query_matrix(1, 0)
    assert r.outcome is True and r.cached
    assert o.stats().T == 1
    assert o.query_matrix(0, 2).outcome is False


def test_matrix_rejects_bad_pairs():
    o = build_oracle(Graph.from_edges(3, []), MATRIX)
    with pytest.raises(ValueError):
        o.query_matrix(1, 1)
    with pytest.raises(ValueError):
        o.query_matrix(0, 3)


def test_list_query_order_and_null():
    g = Graph.from_edges(3, [(0, 1), (0, 2)])
    o = build_oracle(g, LIST, ordering_seed=5)
    order = HiddenGraph(g, 5).neighbor_order[0]
    assert sorted(order) == [1, 2]
    assert o.query_list(0, 1).outcome == order[0]
    assert o.query_list(0, 2).outcome == order[1]
    assert o.query_list(0, 3).outcome is None
    assert o.query_list(0, 3).cached


def test_list_isolated_vertex():
    o = build_oracle(Graph.from_edges(2, []), LIST)
    assert o.query_list(1, 1).outcome is None


def test_list_rejects_bad_keys():
    o = build_oracle(Graph.from_edges(2, [(0, 1)]), LIST)
    with pytest.raises(ValueError):
        o.query_list(0, 0)
    with pytest.raises(ValueError):
        o.query_list(2, 1)


def test_build_oracle_triangle_matrix(triangle):
    o = build_oracle(triangle, MATRIX, ordering_seed=123)
    present = [o.query_matrix(u, v).outcome for u, v in [(0, 1), (0, 2), (1, 2)]]
    assert present == [True, True, True]


def test_list_orderings_reproducible(triangle):
    a = HiddenGraph(triangle, 9).neighbor_order
    b = HiddenGraph(triangle, 9).neighbor_order
    assert a == b


def test_star_center_list():
    star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    o = build_oracle(star, LIST, ordering_seed=2)
    assert all(o.query_list(0, i).outcome is not None for i in (1, 2, 3))
    assert o.query_list(0, 4).outcome is None


def test_full_matrix_scan_n4():
    o = build_oracle(Graph.from_edges(4, [(0, 1), (2, 3)]), MATRIX)
    for u in range(4):
        for v in range(4):
            if u != v:
                o.query_matrix(u, v)
    assert o.stats().T == 6


def test_unknown_model(triangle):
    with pytest.raises(ValueError):
        build_oracle(triangle, "tensor")


def test_knowledge_tracking():
    g = Graph.from_edges(3, [(0, 1)])
    o = build_oracle(g, LIST, ordering_seed=0)
    assert o.edge_status[0, 1] == UNKNOWN
    o.query_list(0, 1)
    assert o.edge_status[0, 1] == PRESENT and o.edge_status[1, 0] == PRESENT
    o.query_list(0, 2)  # null: the rest of row 0 is absent
    assert o.edge_status[0, 2] == ABSENT and o.edge_status[2, 0] == ABSENT
    assert o.list_complete[0]


def test_observer_sees_only_fresh_queries():
    seen = []
    o = build_oracle(Graph.from_edges(3, [(0, 1)]), MATRIX)
    o.observer = lambda ctx, key, outcome: seen.append((key, outcome))
    o.query_matrix(0, 1)
    o.query_matrix(1, 0)
    o.query_matrix(0, 2)
    assert seen == [((0, 1), True), ((0, 2), False)]


@given(graphs(max_n=8), st.integers(0, 1000), st.lists(st.tuples(st.integers(0, 7), st.integers(1, 9)), max_size=40))
def test_list_ledger_is_deterministic(g, seed, keys):
    def replay():
        o = build_oracle(g, LIST, ordering_seed=seed)
        for u, i in keys:
            if u < g.n:
                o.query_list(u, i)
        return o.ledger.dumps(), o.stats()

    first, stats = replay()
    assert replay() == (first, stats)
    assert stats.T <= 2 * g.m + g.n + sum(1 for u, i in set(keys) if u < g.n and i > g.degree(u) + 1)


@given(graphs(max_n=8), st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7)), max_size=60))
def test_matrix_depth_bound(g, pairs):
    o = build_oracle(g, MATRIX)
    for u, v in pairs:
        if u != v and u < g.n and v < g.n:
            o.query_matrix(u, v)
    assert o.stats().T <= g.n * (g.n - 1) // 2
    assert o.stats().present == sum(1 for key, out in o.ledger.items() if out)
