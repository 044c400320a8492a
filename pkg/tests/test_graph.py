import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from powergraph_lab.errors import TooLargeForExactIso, VertexOutOfRange
from powergraph_lab.graph import (
    Graph,
    chordless_cycles,
    complete,
    components,
    cycle,
    disjoint_union,
    empty,
    find_cycle,
    is_chordal,
    is_connected,
    is_isomorphic_small,
    join,
    maximum_cardinality_search,
    multiple,
    path,
    perfect_elimination_ordering,
    star,
    to_dot,
    to_edge_list,
)


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = [e for e in pairs if draw(st.booleans())]
    return n, edges


def test_rejects_bad_adjacency():
    with pytest.raises(ValueError):
        Graph(np.array([[0, 1], [0, 0]], dtype=bool))
    with pytest.raises(ValueError):
        Graph(np.array([[1, 0], [0, 0]], dtype=bool))
    with pytest.raises(VertexOutOfRange):
        Graph.from_edges(2, [(0, 2)])


def test_basic_api():
    g = Graph.from_edges(4, [(2, 1), (0, 1), (1, 3)])
    assert g.num_edges == 3
    assert g.edges() == [(0, 1), (1, 2), (1, 3)]
    assert g.degree(1) == 3 and g.neighbors(1) == [0, 2, 3]
    assert g.has_edge(2, 1) and not g.has_edge(0, 2)
    h = g.delete_vertices([1])
    assert h.n == 3 and h.num_edges == 0
    assert g.kept_after_delete([1]) == [0, 2, 3]
    with pytest.raises(VertexOutOfRange):
        g.delete_vertices([7])


def test_constructors():
    assert complete(5).num_edges == 10
    assert cycle(6).num_edges == 6
    assert path(4).num_edges == 3
    assert star(3).degrees.tolist() == [3, 1, 1, 1]
    assert empty(3).num_edges == 0
    u = disjoint_union([cycle(3), cycle(3)])
    assert u.n == 6 and len(components(u)) == 2
    j = join(complete(1), u)
    assert j.n == 7 and j.num_edges == 12
    assert multiple(4, complete(2)).num_edges == 4


def test_components_examples():
    dec = components(disjoint_union([cycle(3), cycle(3)]))
    assert dec.cyclic_count == 2
    dec = components(star(3))
    assert len(dec) == 1 and dec.cyclic_count == 0
    dec = components(multiple(4, complete(2)))
    assert len(dec) == 4 and dec.cyclic_count == 0
    assert not is_connected(empty(0))


@settings(max_examples=150, deadline=None)
@given(graphs())
def test_components_match_dfs(data):
    n, edges = data
    g = Graph.from_edges(n, edges)
    adj = oracles.adjacency_sets(n, edges)
    ref = oracles.dfs_components(adj, set(range(n)))
    dec = components(g)
    assert sorted(map(tuple, map(sorted, ref))) == sorted(dec.components)
    for comp, cyc in zip(dec.components, dec.has_cycle):
        assert cyc == oracles.has_cycle_dfs(adj, set(comp))


@settings(max_examples=150, deadline=None)
@given(graphs())
def test_find_cycle(data):
    n, edges = data
    g = Graph.from_edges(n, edges)
    adj = oracles.adjacency_sets(n, edges)
    c = find_cycle(g)
    if c is None:
        assert components(g).cyclic_count == 0
    else:
        assert oracles.is_cycle(adj, c)


@settings(max_examples=150, deadline=None)
@given(graphs(max_n=8))
def test_chordless_cycles_match_subsets(data):
    n, edges = data
    g = Graph.from_edges(n, edges)
    cycles, done = chordless_cycles(g)
    assert done
    assert {frozenset(c) for c in cycles} == oracles.chordless_cycles(n, edges)
    assert len(cycles) == len({frozenset(c) for c in cycles})
    adj = oracles.adjacency_sets(n, edges)
    assert all(oracles.is_cycle(adj, list(c)) for c in cycles)


def test_chordless_cycles_on_triangle_pair():
    g = join(complete(1), disjoint_union([complete(3), complete(3)]))
    cycles, done = chordless_cycles(g)
    ref = oracles.chordless_cycles(g.n, g.edges())
    assert done and {frozenset(c) for c in cycles} == ref
    assert all(len(c) == 3 for c in cycles)
    assert len(cycles) == 2 + 6  # two K3's plus apex with each of their edges


def test_chordless_cycle_bound():
    g = cycle(7)
    assert chordless_cycles(g, max_length=6) == ([], False)
    cycles, done = chordless_cycles(g, max_length=7)
    assert done and len(cycles) == 1


@settings(max_examples=150, deadline=None)
@given(graphs(max_n=8))
def test_chordality_matches_oracle(data):
    n, edges = data
    g = Graph.from_edges(n, edges)
    assert is_chordal(g) == oracles.is_chordal(n, edges)
    peo = perfect_elimination_ordering(g)
    if peo is not None:
        pos = {v: i for i, v in enumerate(peo)}
        for v in peo:
            later = [u for u in g.neighbors(v) if pos[u] > pos[v]]
            assert all(g.has_edge(a, b) for i, a in enumerate(later) for b in later[i + 1 :])


def test_mcs_is_permutation():
    g = cycle(5)
    assert sorted(maximum_cardinality_search(g)) == list(range(5))
    assert not is_chordal(cycle(4))
    assert is_chordal(complete(6))


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=7), st.randoms(use_true_random=False))
def test_isomorphism(data, rnd):
    n, edges = data
    g = Graph.from_edges(n, edges)
    perm = list(range(n))
    rnd.shuffle(perm)
    h = Graph.from_edges(n, [(perm[u], perm[v]) for u, v in edges])
    assert is_isomorphic_small(g, h)
    other = Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rnd.random() < 0.5])
    assert is_isomorphic_small(g, other) == oracles.isomorphic(n, g.edges(), other.edges())


def test_isomorphism_limits():
    assert is_isomorphic_small(multiple(4, complete(2)), Graph.from_edges(8, [(0, 7), (1, 6), (2, 5), (3, 4)]))
    assert not is_isomorphic_small(cycle(6), disjoint_union([cycle(3), cycle(3)]))
    with pytest.raises(TooLargeForExactIso):
        is_isomorphic_small(cycle(13), cycle(13))


def test_exports_deterministic():
    g = Graph.from_edges(3, [(2, 0), (0, 1)], labels=['a "x"', "b", "c"])
    assert to_edge_list(g) == "0 1\n0 2\n"
    dot = to_dot(g, "T")
    assert dot == to_dot(g, "T")
    assert dot.splitlines()[0] == 'graph "T" {'
    assert '  0 [label="a \\"x\\""];' in dot
    assert dot.count(" -- ") == 2


def test_random_subgraph_relabel():
    rng = random.Random(5)
    edges = oracles.random_graph(rng, 10, 0.4)
    g = Graph.from_edges(10, edges)
    # renumbered in increasing order: 2 -> 0, 5 -> 1, 7 -> 2
    sub = g.induced_subgraph([7, 2, 5])
    assert sub.n == 3
    assert sub.has_edge(0, 2) == g.has_edge(2, 7)
    assert sub.has_edge(1, 2) == g.has_edge(5, 7)
