import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from l1tiling.embedder import (Embedding, MetricSpace, canonical_cuts, l1_embed, periodic_embed,
                               rigidity_check, scale1_embed, theta_classes, verify_embedding)
from l1tiling.graphcore import (PolyhedralGraph, all_pairs_distances, complete_bipartite,
                                complete_graph, cycle_graph, path_graph)
from l1tiling.hypermetric import Pass, kgonal_check, verify_certificate
from l1tiling.periodicnet import parse_net
from l1tiling.polygen import prism, product

from test_graphcore import connected_graphs

Z3 = "net z3\ndim 3\nvertex a 0 0 0\nedge a a 1 0 0\nedge a a 0 1 0\nedge a a 0 0 1\n"


@st.composite
def trees(draw, max_n=14):
    n = draw(st.integers(2, max_n))
    return PolyhedralGraph(n, [(draw(st.integers(0, v - 1)), v) for v in range(1, n)])


def test_cube_is_h3():
    rep = l1_embed(prism(4))
    assert rep.status == "embeds" and rep.embedding.label() == "H_3"
    assert verify_embedding(all_pairs_distances(prism(4)), rep.embedding)


@pytest.mark.parametrize("n,label", [(5, "1/2 H_5"), (7, "1/2 H_7"), (6, "H_3"), (8, "H_4")])
def test_cycles(n, label):
    assert l1_embed(cycle_graph(n)).embedding.label() == label


def test_k23_refuted():
    g = complete_bipartite(2, 3)
    rep = l1_embed(g)
    assert rep.status == "not_embeddable"
    assert rep.certificate.k == 5 and verify_certificate(all_pairs_distances(g), rep.certificate)


def test_corrupted_embedding_fails_verification():
    g = prism(4)
    e = l1_embed(g).embedding
    bad = Embedding(e.scale, e.target, e.dim, e.coords.copy())
    bad.coords[3, 0] ^= 1
    assert not verify_embedding(all_pairs_distances(g), bad)


def test_theta_classes_of_even_cycle():
    classes = theta_classes(cycle_graph(8))
    assert sorted(len(c) for c in classes) == [2, 2, 2, 2]


def test_tetrahedron_not_rigid_with_both_witnesses():
    g = complete_graph(4)
    e = l1_embed(g).embedding
    res = rigidity_check(g, e)
    assert res is not True and res[0] is False
    labels = {e.label(), res[1].label()}
    assert labels == {"1/2 H_3", "1/2 H_4"}
    d = all_pairs_distances(g)
    assert verify_embedding(d, e) and verify_embedding(d, res[1])


def test_cube_rigid():
    g = prism(4)
    assert rigidity_check(g, l1_embed(g).embedding) is True


def test_canonical_cuts_complement_invariant():
    n = 4
    full = (1 << n) - 1
    assert canonical_cuts([0b0011, 0b0101], n) == canonical_cuts([full ^ 0b0011, 0b0101], n)


@settings(max_examples=40, deadline=None)
@given(trees())
def test_trees_are_hypercube_graphs(t):
    e = scale1_embed(t)
    assert isinstance(e, Embedding) and e.dim == t.n - 1
    assert verify_embedding(all_pairs_distances(t), e)


@settings(max_examples=40, deadline=None)
@given(connected_graphs(max_n=9))
def test_embeds_implies_pentagonal(g):
    """Embeds => exhaustive 5-gonal Pass; NotEmbeddable => verified certificate."""
    rep = l1_embed(g)
    d = all_pairs_distances(g)
    if rep.status == "embeds":
        assert verify_embedding(d, rep.embedding)
        assert isinstance(kgonal_check(d, 5), Pass)
    elif rep.status == "not_embeddable":
        assert verify_certificate(d, rep.certificate)


@settings(max_examples=30, deadline=None)
@given(connected_graphs(max_n=5), connected_graphs(max_n=5))
def test_product_metric_law(g, h):
    """Product distances add, and the product embeds iff both factors embed."""
    p = product(g, h)
    dp, dg, dh = all_pairs_distances(p), all_pairs_distances(g), all_pairs_distances(h)
    want = dg[:, None, :, None] + dh[None, :, None, :]
    assert np.array_equal(dp, want.reshape(p.n, p.n))
    sg, sh = l1_embed(g).status, l1_embed(h).status
    assume("inconclusive" not in (sg, sh))
    rp = l1_embed(p)
    assert (rp.status == "embeds") == (sg == "embeds" and sh == "embeds")
    if rp.status == "embeds":
        assert verify_embedding(dp, rp.embedding)


def test_periodic_square_and_cubic_lattices():
    sq = parse_net("net sq\ndim 2\nvertex a 0 0\nedge a a 1 0\nedge a a 0 1\n")
    rep = periodic_embed(sq, 2)
    assert rep.summary() == "Z_2"
    assert periodic_embed(parse_net(Z3), 2).summary() == "Z_3"


def test_periodic_needs_radius_two():
    with pytest.raises(ValueError):
        periodic_embed(parse_net(Z3), 1)


def test_metric_space_convexity():
    sp = MetricSpace(all_pairs_distances(path_graph(4)))
    assert sp.is_convex(0b0011) and not sp.is_convex(0b0101)
