import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from l1tiling.graphcore import (GraphError, PolyhedralGraph, all_pairs_distances, complete_bipartite,
                                cycle_graph, diameter, dual_polyhedron, euler_characteristic,
                                format_poly, is_bipartite, isomorphic, parse_poly, path_graph,
                                rooted_ball)
from l1tiling.polygen import antiprism, prism

from conftest import to_nx


@st.composite
def connected_graphs(draw, max_n=10):
    n = draw(st.integers(2, max_n))
    # random spanning tree plus extra edges keeps the graph connected
    edges = {(draw(st.integers(0, v - 1)), v) for v in range(1, n)}
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=2 * n))
    edges |= {(min(a, b), max(a, b)) for a, b in extra if a != b}
    return PolyhedralGraph(n, sorted(edges))


def test_distances_small():
    d = all_pairs_distances(cycle_graph(6))
    assert d[0].tolist() == [0, 1, 2, 3, 2, 1]
    assert diameter(path_graph(5)) == 4


def test_rejects_bad_edges():
    with pytest.raises(GraphError):
        PolyhedralGraph(3, [(0, 0)])
    with pytest.raises(GraphError):
        PolyhedralGraph(3, [(0, 5)])


def test_bipartite_witness():
    ok, _ = is_bipartite(cycle_graph(6))
    assert ok
    ok, cyc = is_bipartite(cycle_graph(5))
    assert not ok and len(cyc) % 2 == 1


@settings(max_examples=60, deadline=None)
@given(connected_graphs())
def test_distances_match_networkx(g):
    d = all_pairs_distances(g)
    ref = dict(nx.all_pairs_shortest_path_length(to_nx(g)))
    for u in range(g.n):
        for v in range(g.n):
            assert d[u, v] == ref[u][v]


@settings(max_examples=60, deadline=None)
@given(connected_graphs(), st.randoms(use_true_random=False))
def test_isomorphic_to_relabelling(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = PolyhedralGraph(g.n, [(perm[u], perm[v]) for u, v in g.edges])
    ok, f = isomorphic(g, h)
    assert ok
    assert {(min(f[u], f[v]), max(f[u], f[v])) for u, v in g.edges} == h.edge_set()


@settings(max_examples=60, deadline=None)
@given(connected_graphs(max_n=8), connected_graphs(max_n=8))
def test_isomorphic_agrees_with_networkx(g, h):
    assert isomorphic(g, h)[0] == nx.is_isomorphic(to_nx(g), to_nx(h))


def test_regular_non_isomorphic_pair():
    # prism on a hexagon and the Moebius-Kantor-like twisted ladder are both cubic
    a = prism(6)
    b = PolyhedralGraph(12, [(i, (i + 1) % 12) for i in range(12)] + [(i, i + 6) for i in range(6)])
    assert not isomorphic(a, b)[0]
    assert not nx.is_isomorphic(to_nx(a), to_nx(b))


def test_poly_roundtrip(catalog):
    g = build_first(catalog)
    h = parse_poly(format_poly(g))
    assert h.n == g.n and h.edge_set() == g.edge_set() and sorted(h.faces) == sorted(g.faces)


def build_first(cat):
    from l1tiling.catalog import build_graph
    return build_graph(cat, cat.get("T1.truncated_octahedron"))


def test_parse_poly_errors():
    with pytest.raises(GraphError):
        parse_poly("poly broken 3\nedge 0 1\nedge 1 7\n")


def test_dual_counts():
    cube = prism(4)
    octa = dual_polyhedron(cube)
    assert (octa.n, len(octa.edges), len(octa.faces)) == (6, 12, 8)
    assert set(octa.degrees()) == {4}
    assert euler_characteristic(octa) == 2


def test_dual_involution(finite_corpus):
    """dual(dual(P)) is isomorphic to P for every polyhedron in the corpus."""
    checked = 0
    for name, g in finite_corpus:
        if not g.faces or not (name.startswith("T1.")):
            continue
        dd = dual_polyhedron(dual_polyhedron(g))
        assert isomorphic(dd, g)[0], name
        checked += 1
    assert checked >= 40


def test_rooted_ball_marks_root():
    b = rooted_ball(complete_bipartite(1, 6), 0, 1)
    assert b.n == 7 and len(b.edges) == 6


@pytest.mark.parametrize("n", [3, 4, 5, 8])
def test_prism_antiprism_shapes(n):
    p, a = prism(n), antiprism(n)
    assert (p.n, len(p.edges), len(p.faces)) == (2 * n, 3 * n, n + 2)
    assert (a.n, len(a.edges), len(a.faces)) == (2 * n, 4 * n, 2 * n + 2)
    assert euler_characteristic(p) == euler_characteristic(a) == 2
