import itertools

import networkx as nx
import numpy as np
import pytest
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import shortest_path

from l1tiling.catalog import build_net
from l1tiling.graphcore import GraphError, complete_bipartite, isomorphic, rooted_ball
from l1tiling.periodicnet import (ball, expand_patch, grunbaum_net, kelvin_net, nets_isomorphic,
                                  noncompact_patch, parse_net, vertex_homogeneous)

from conftest import to_nx

FCC_BASIS = np.array([[1, 1, 0], [1, 0, 1], [0, 1, 1]])
Z3_BASIS = np.eye(3, dtype=int)
FCC_STEPS = [v for v in itertools.product((-1, 0, 1), repeat=3) if sum(map(abs, v)) == 2]
Z3_STEPS = [v for v in itertools.product((-1, 0, 1), repeat=3) if sum(map(abs, v)) == 1]


def lattice_oracle(points, steps, box):
    """Graph distances between ``points`` in the lattice graph restricted to a large box."""
    rng = range(-box, box + 1)
    grid = [p for p in itertools.product(rng, repeat=3)
            if steps is Z3_STEPS or sum(p) % 2 == 0]
    index = {p: i for i, p in enumerate(grid)}
    rows, cols = [], []
    for p, i in index.items():
        for s in steps:
            q = (p[0] + s[0], p[1] + s[1], p[2] + s[2])
            j = index.get(q)
            if j is not None:
                rows.append(i)
                cols.append(j)
    A = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(len(grid), len(grid))).tocsr()
    src = [index[tuple(int(x) for x in p)] for p in points]
    D = shortest_path(A, unweighted=True, indices=src)
    return D[:, src].astype(int)


@pytest.mark.parametrize("ident,basis,steps,sizes", [
    ("T3.01", Z3_BASIS, Z3_STEPS, [1, 7, 25, 63]),
    ("T3.05", FCC_BASIS, FCC_STEPS, [1, 13, 55, 147]),
])
def test_safe_core_against_lattice_oracle(catalog, ident, basis, steps, sizes):
    net = build_net(catalog.get(ident), catalog.root)
    R = 6
    patch = expand_patch(net, R)
    counts = [int(np.searchsorted(patch.depth, k, side="right")) for k in range(4)]
    assert counts == sizes  # frozen values: ball sizes of Z^3 and fcc
    d = patch.metric(R // 2)
    pts = np.array([patch.keys[i][1] for i in range(d.shape[0])]) @ basis
    ref = lattice_oracle(pts, steps, box=R + 2)
    assert np.array_equal(d, ref)


def test_metric_refuses_inexact_radius(catalog):
    patch = expand_patch(build_net(catalog.get("T3.01"), catalog.root), 4)
    with pytest.raises(ValueError):
        patch.metric(3)


def test_z3_star(catalog):
    b = ball(build_net(catalog.get("T3.01"), catalog.root), 0, 1)
    assert isomorphic(b, rooted_ball(complete_bipartite(1, 6), 0, 1))[0]


def test_parse_errors():
    with pytest.raises(GraphError):
        parse_net("net x\ndim 3\nvertex a 0 0 0\nedge a a 0 0 0\n")
    with pytest.raises(GraphError):
        parse_net("net x\ndim 3\nvertex a 0 0 0\nedge a b 1 0 0\n")
    with pytest.raises(GraphError):
        parse_net("net x\ndim 4\nvertex a 0 0 0 0\n")


def test_roundtrip(catalog):
    net = build_net(catalog.get("T3.09"), catalog.root)
    again = parse_net(net.to_text())
    assert again.edges == net.edges and again.names == net.names


def test_uniform_nets_homogeneous(catalog):
    for e in catalog:
        if e.kind.startswith("net") and not e.is_dual and e.id[:2] in ("T2", "T3"):
            assert vertex_homogeneous(build_net(e, catalog.root), 2)[0], e.id


def _nx_classes(net, r):
    """Independent oracle: rooted-ball classes with networkx's VF2."""
    balls = []
    for i in range(net.motif_size):
        G = to_nx(ball(net, i, r))
        nx.set_node_attributes(G, {v: v == 0 for v in G}, "root")
        balls.append(G)
    classes = []
    for G in balls:
        for c in classes:
            if nx.is_isomorphic(c, G, node_match=lambda a, b: a["root"] == b["root"]):
                break
        else:
            classes.append(G)
    return len(classes)


@pytest.mark.parametrize("word", ["aab", "abb"])
def test_elongated_kelvin_ball_classes(word):
    # frozen from the networkx oracle: one class at r=1, two at r=2
    net = kelvin_net(word, elongated=True)
    assert len(vertex_homogeneous(net, 1)[1]) == 1 == _nx_classes(net, 1)
    assert len(vertex_homogeneous(net, 2)[1]) == 2 == _nx_classes(net, 2)


def test_proper_kelvin_two_vertex_figures():
    net = kelvin_net("aab")
    assert len(vertex_homogeneous(net, 1)[1]) == 2 == _nx_classes(net, 1)


@pytest.mark.parametrize("fam,word,el,target", [
    (kelvin_net, "a", False, "T3.05"), (kelvin_net, "ab", False, "T3.24"),
    (grunbaum_net, "a", False, "T3.03"), (grunbaum_net, "ab", False, "T3.27"),
])
def test_generator_identities_networkx(catalog, fam, word, el, target):
    a = fam(word, elongated=el)
    b = build_net(catalog.get(target), catalog.root)
    assert nets_isomorphic(a, b, 2)
    ga, gb = to_nx(ball(a, 0, 2)), to_nx(ball(b, 0, 2))
    assert nx.is_isomorphic(ga, gb)


def test_fcc_and_hcp_stars_differ(catalog):
    fcc = build_net(catalog.get("T3.05"), catalog.root)
    hcp = build_net(catalog.get("T3.24"), catalog.root)
    assert not nets_isomorphic(fcc, hcp, 1)


def test_bad_word():
    with pytest.raises(ValueError):
        kelvin_net("abc")
    with pytest.raises(ValueError):
        grunbaum_net("")


@pytest.mark.parametrize("kind,deg", [("A19", 4), ("A22", 6), ("par-type", 6)])
def test_noncompact_roots(kind, deg):
    p = noncompact_patch(kind, 6)
    assert len(p.graph.adj[0]) == deg
    with pytest.raises(ValueError):
        noncompact_patch(kind, 2)


def test_noncompact_unknown_kind():
    with pytest.raises(ValueError):
        noncompact_patch("nope", 6)
