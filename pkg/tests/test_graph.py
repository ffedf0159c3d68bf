import pytest
from hypothesis import given
from hypothesis import strategies as st

from qmatching.graph import (
    Graph,
    augment,
    edge,
    format_edge_list,
    is_augmenting_path,
    parse_edge_list,
    read_edge_list,
    symmetric_difference,
    validate_matching,
    write_edge_list,
)

from .conftest import graphs

A, B, C, D = 0, 1, 2, 3


def test_symdiff_identity():
    assert symmetric_difference({(A, B)}, set()) == {(A, B)}


def test_symdiff_self_cancels():
    assert symmetric_difference({(A, B)}, {(A, B)}) == frozenset()


def test_symdiff_with_length_three_path():
    assert symmetric_difference({(B, C)}, {(A, B), (B, C), (C, D)}) == {(A, B), (C, D)}


def test_symdiff_normalizes_orientation():
    assert symmetric_difference({(B, A)}, {(A, B)}) == frozenset()


def test_augment_length_three():
    out = augment({(B, C)}, [(A, B, C, D)])
    assert out == {(A, B), (C, D)}
    assert len(out) == 2


def test_augment_empty():
    assert augment(set(), []) == frozenset()


def test_augment_single_edge():
    assert augment(set(), [(4, 7)]) == {(4, 7)}


def test_augment_rejects_overlap():
    with pytest.raises(ValueError, match="shares a vertex"):
        augment(set(), [(0, 1), (1, 2)])


def test_augment_rejects_non_augmenting():
    with pytest.raises(ValueError, match="not augmenting"):
        augment({(0, 1)}, [(0, 1)])


def test_validate_matching(triangle):
    assert validate_matching(triangle, {(A, B)})
    assert not validate_matching(triangle, {(A, B), (B, C)})
    assert not validate_matching(Graph.from_edges(4, [(A, B)]), {(C, D)})


def test_is_augmenting_path(p4):
    assert is_augmenting_path(p4, {(B, C)}, (A, B, C, D))
    # a-b and b-c both unmatched
    assert not is_augmenting_path(p4, set(), (A, B, C, D))
    # endpoint d is matched
    assert not is_augmenting_path(p4, {(C, D)}, (A, B, C, D))
    assert not is_augmenting_path(p4, {(B, C)}, (A, C))


def test_graph_rejects_bad_input():
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(1, 1)])
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        Graph.from_edges(2, [(0, 2)])
    with pytest.raises(ValueError):
        Graph(-1, frozenset())


def test_edge_list_round_trip(tmp_path, triangle):
    path = tmp_path / "g.txt"
    write_edge_list(triangle, path)
    assert read_edge_list(path) == triangle
    assert parse_edge_list(format_edge_list(triangle)) == triangle


def test_parse_rejects_wrong_edge_count():
    with pytest.raises(ValueError):
        parse_edge_list("3 2\n0 1\n")


@given(st.sets(st.tuples(st.integers(0, 6), st.integers(0, 6)).filter(lambda e: e[0] != e[1]).map(lambda e: edge(*e))),
       st.sets(st.tuples(st.integers(0, 6), st.integers(0, 6)).filter(lambda e: e[0] != e[1]).map(lambda e: edge(*e))))
def test_symdiff_commutes_and_cancels(a, b):
    assert symmetric_difference(a, b) == symmetric_difference(b, a)
    assert symmetric_difference(a, a) == frozenset()
    assert symmetric_difference(symmetric_difference(a, b), b) == frozenset(a)


@given(graphs(max_n=9), st.randoms(use_true_random=False))
def test_augment_adds_one_edge_per_path(g, rnd):
    # build disjoint single-edge paths from a random greedy set of free pairs
    edges = sorted(g.edges)
    rnd.shuffle(edges)
    used, paths = set(), []
    for u, v in edges:
        if u not in used and v not in used:
            used.update((u, v))
            paths.append((u, v))
    out = augment(frozenset(), paths)
    assert len(out) == len(paths)
    assert validate_matching(g, out)
