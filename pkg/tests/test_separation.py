import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grangergraph import MixedGraph, QueryError, marginal_ancestral_graph
from grangergraph.separation import (
    Mark,
    PathKind,
    Traversal,
    b_pointing_blocked,
    collider_status,
    ext_bipointing_blocked,
    extend_separation,
    is_extended_bipointing,
    is_p_connecting,
    oracle_find_path,
    oracle_path_exists,
    p_connecting_exists,
    p_separated,
    pure_collider_check,
    pure_collider_path_exists,
    trail_p_active_exists,
    traversals,
)

from strategies import mixed_graphs

H, T, L = Mark.HEAD, Mark.TAIL, Mark.LINE
EXT = PathKind.EXTENDED_BIPOINTING


@pytest.mark.parametrize(
    "arrive,depart,expected",
    [
        (H, H, "collider"),
        (H, L, "collider"),
        (L, H, "collider"),
        (H, T, "noncollider"),
        (T, H, "noncollider"),
        (T, T, "noncollider"),
        (L, L, "noncollider"),
        (L, T, "noncollider"),
        (T, L, "noncollider"),
    ],
)
def test_collider_status(arrive, depart, expected):
    assert collider_status(arrive, depart) == expected


def test_traversals_two_per_edge(g5):
    out = traversals(g5)
    total = sum(len(ts) for ts in out)
    assert total == 2 * (len(g5.directed) + len(g5.undirected))
    for ts in out:
        for t in ts:
            if t.depart is L:
                assert t.arrive is L


def test_p_connecting_examples(g5):
    assert not p_connecting_exists(g5, 1, 5, {3, 4})
    assert p_connecting_exists(g5, 1, 4, {3})
    assert not p_connecting_exists(g5, 1, 4, {3, 4}, PathKind.B_POINTING)
    assert not p_connecting_exists(g5, 1, 4, {2, 3, 4}, EXT)
    assert not p_connecting_exists(g5, 1, 4, {1, 3, 4}, EXT)


def test_p_connecting_errors(g5):
    with pytest.raises(QueryError):
        p_connecting_exists(g5, 1, 1, ())
    with pytest.raises(QueryError):
        p_connecting_exists(g5, 1, 4, {1})
    with pytest.raises(QueryError):
        p_connecting_exists(g5, 1, 9, ())
    with pytest.raises(QueryError):
        p_connecting_exists(g5, 1, 4, (), "sideways")


def test_p_separated_g5(g5):
    assert p_separated(g5, {1}, {5}, {3, 4})
    for r in range(4):
        for S in itertools.combinations([2, 3, 5], r):
            assert not p_separated(g5, {1}, {4}, S), S


def test_p_separated_edgeless_and_errors():
    g = MixedGraph([1, 2, 3, 4])
    assert p_separated(g, {1}, {2}, {3})
    assert p_separated(g, {1, 4}, {2}, ())
    with pytest.raises(QueryError):
        p_separated(g, {1}, {1}, ())
    with pytest.raises(QueryError):
        p_separated(g, {1}, {2}, {2})
    with pytest.raises(QueryError):
        p_separated(g, (), {2}, ())


def test_quoted_paths_are_connecting(g5):
    # 1 <- 3 -> 4, 1 -> 3 -- 2 <- 4, 1 -> 3 <- 2 <- 4
    def tr(a, b, mark_a, mark_b):
        return Traversal(g5.index(a), g5.index(b), mark_a, mark_b)

    p1 = [tr(1, 3, H, T), tr(3, 4, T, H)]
    p2 = [tr(1, 3, T, H), tr(3, 2, L, L), tr(2, 4, H, T)]
    p3 = [tr(1, 3, T, H), tr(3, 2, H, T), tr(2, 4, H, T)]
    ids = lambda *xs: {g5.index(x) for x in xs}
    assert is_p_connecting(p1, ids(2, 5))
    assert not is_p_connecting(p1, ids(3))
    assert is_p_connecting(p2, ids(2, 3))
    assert is_p_connecting(p3, ids(3))
    assert not is_p_connecting(p3, ids(2, 3))


def test_b_pointing_blocked_examples(g5, g3):
    assert b_pointing_blocked(g5, {1}, {4}, {3, 4})
    assert b_pointing_blocked(g5, {4}, {1}, {1, 3})
    assert not b_pointing_blocked(g3, {3}, {1}, {1})
    with pytest.raises(QueryError):
        b_pointing_blocked(g5, {1}, {1}, ())


def test_ext_bipointing_blocked_examples(g5):
    assert ext_bipointing_blocked(g5, {1}, {4}, {1, 3, 4})
    assert ext_bipointing_blocked(g5, {1}, {4}, {1, 2, 3, 4, 5})
    g = MixedGraph([1, 2], [], [(1, 2)])
    for C in ((), (1,), (2,), (1, 2)):
        assert not ext_bipointing_blocked(g, {1}, {2}, C)
    with pytest.raises(QueryError):
        ext_bipointing_blocked(g5, {1}, {1}, ())


def test_pure_collider_check_examples(g5):
    assert not pure_collider_check(g5, {1}, {4})
    assert not p_separated(g5, {1}, {4}, {2, 3, 5})
    assert pure_collider_check(MixedGraph([1, 2, 3]), {1}, {2})
    common_child = MixedGraph(["a", "b", "c"], [("a", "c"), ("b", "c")])
    assert not pure_collider_check(common_child, {"a"}, {"b"})
    assert pure_collider_path_exists(common_child, {"a"}, {"b"})


def test_extend_separation_example(g5):
    A2, B2 = extend_separation(g5, {1}, {5}, {3, 4})
    assert "1" in A2 and "5" in B2
    assert A2 | B2 | {"3", "4"} == set(g5.labels)
    assert p_separated(g5, A2, B2, {3, 4})
    assert extend_separation(g5, {1}, {4}, {3}) is None


def test_trail_examples(g5):
    assert not trail_p_active_exists(g5, 1, 5, {3, 4})
    assert trail_p_active_exists(g5, 1, 4, {3})
    assert trail_p_active_exists(MixedGraph(["a", "b"], [("a", "b")]), "a", "b", ())


def test_oracle_examples(g5):
    assert not oracle_path_exists(MixedGraph([1, 2]), 1, 2, ())
    path = oracle_find_path(g5, 1, 4, {3})
    assert path is not None and is_p_connecting(path, {g5.index(3)})
    for a, b in itertools.permutations(g5.labels, 2):
        rest = [v for v in g5.labels if v not in (a, b)]
        for r in range(len(rest) + 1):
            for S in itertools.combinations(rest, r):
                assert oracle_path_exists(g5, a, b, S) == p_connecting_exists(g5, a, b, S)


def test_extended_bipointing_recognizer():
    u = Traversal(0, 1, L, L)
    back = Traversal(1, 2, H, T)  # 1 <- 2
    fwd = Traversal(2, 3, T, H)  # 2 -> 3
    assert is_extended_bipointing([u])
    assert is_extended_bipointing([u, back, fwd, Traversal(3, 4, L, L)])
    assert not is_extended_bipointing([fwd])
    assert not is_extended_bipointing([back])
    assert not is_extended_bipointing([u, fwd])


# -- properties over random graphs ------------------------------------------


def _queries(g):
    for a, b in itertools.permutations(g.labels, 2):
        rest = [v for v in g.labels if v not in (a, b)]
        for r in range(len(rest) + 1):
            for S in itertools.combinations(rest, r):
                yield a, b, S


@settings(max_examples=150, deadline=None)
@given(mixed_graphs(min_vertices=2))
def test_three_engines_agree(g):
    for a, b, S in _queries(g):
        auto = p_connecting_exists(g, a, b, S)
        assert oracle_path_exists(g, a, b, S) == auto
        assert trail_p_active_exists(g, a, b, S) == auto


@settings(max_examples=60, deadline=None)
@given(mixed_graphs(min_vertices=2, max_vertices=4, max_edges=8), st.data())
def test_pointing_kinds_match_oracle(g, data):
    a, b = data.draw(st.permutations(g.labels))[:2]
    C = [v for v in g.labels if data.draw(st.booleans())]
    for kind in (PathKind.B_POINTING, EXT):
        assert p_connecting_exists(g, a, b, C, kind) == oracle_path_exists(g, a, b, C, kind)


@settings(max_examples=150, deadline=None)
@given(mixed_graphs(min_vertices=2), st.data())
def test_symmetry(g, data):
    lab = list(data.draw(st.permutations(g.labels)))
    k = data.draw(st.integers(1, len(lab) - 1))
    A, rest = lab[:k], lab[k:]
    j = data.draw(st.integers(1, len(rest)))
    B, S = rest[:j], rest[j:]
    assert p_separated(g, A, B, S) == p_separated(g, B, A, S)
    C = A + B + S
    assert ext_bipointing_blocked(g, A, B, C) == ext_bipointing_blocked(g, B, A, C)


@settings(max_examples=150, deadline=None)
@given(mixed_graphs(min_vertices=2), st.data())
def test_ancestral_reduction(g, data):
    lab = list(data.draw(st.permutations(g.labels)))
    A, B = [lab[0]], [lab[1]]
    S = [v for v in lab[2:] if data.draw(st.booleans())]
    mag = marginal_ancestral_graph(g, A + B + S)
    assert p_separated(g, A, B, S) == p_separated(mag, A, B, S)


@settings(max_examples=150, deadline=None)
@given(mixed_graphs(min_vertices=2, self_loops=True), st.data())
def test_self_loop_invariance(g, data):
    h = g.normalized()
    a, b = data.draw(st.permutations(g.labels))[:2]
    C = [v for v in g.labels if data.draw(st.booleans())]
    S = [v for v in C if v not in (a, b)]
    assert p_separated(g, [a], [b], S) == p_separated(h, [a], [b], S)
    assert trail_p_active_exists(g, a, b, S) == trail_p_active_exists(h, a, b, S)
    assert b_pointing_blocked(g, [a], [b], [v for v in C if v != a]) == b_pointing_blocked(
        h, [a], [b], [v for v in C if v != a]
    )
    assert ext_bipointing_blocked(g, [a], [b], C) == ext_bipointing_blocked(h, [a], [b], C)


@settings(max_examples=100, deadline=None)
@given(mixed_graphs(min_vertices=2, max_vertices=4, max_edges=8), st.data())
def test_ext_witnesses_have_no_endpoint_tails(g, data):
    a, b = data.draw(st.permutations(g.labels))[:2]
    C = [v for v in g.labels if data.draw(st.booleans())]
    path = oracle_find_path(g, a, b, C, EXT)
    if path is not None:
        assert is_extended_bipointing(path)
        assert path[0].depart is not T and path[-1].arrive is not T


@settings(max_examples=150, deadline=None)
@given(mixed_graphs(min_vertices=2), st.data())
def test_extend_separation_partitions_ancestral_set(g, data):
    a, b = data.draw(st.permutations(g.labels))[:2]
    S = [v for v in g.labels if v not in (a, b) and data.draw(st.booleans())]
    ext = extend_separation(g, [a], [b], S)
    if not p_separated(g, [a], [b], S):
        assert ext is None
        return
    A2, B2 = ext
    anc = g.label_set(g.ancestors_of(g.ids([a, b] + S)))
    assert a in A2 and b in B2 and not A2 & B2
    assert A2 | B2 | set(S) == anc
    assert p_separated(g, A2, B2, S)
