import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from l1tiling.graphcore import all_pairs_distances, complete_bipartite, cycle_graph
from l1tiling.hypermetric import (Pass, ViolationCertificate, bvector, kgonal_check, margin,
                                  verify_certificate)

from test_graphcore import connected_graphs


def brute_force_max_margin(d, k):
    """Independent oracle: best margin over all k-subsets and sign placements."""
    n = d.shape[0]
    h = (k + 1) // 2
    best = None
    for pts in itertools.combinations(range(n), k):
        for pos in itertools.combinations(pts, h):
            s = [1 if p in pos else -1 for p in pts]
            m = sum(s[i] * s[j] * d[pts[i], pts[j]] for i in range(k) for j in range(i + 1, k))
            best = m if best is None else max(best, m)
    return best


def test_bvector():
    assert bvector(5) == (1, 1, 1, -1, -1)
    assert sum(bvector(7)) == 1
    with pytest.raises(ValueError):
        bvector(6)


def test_k23_violates_pentagonal():
    # K_{2,3}: +1 on the three-vertex side, -1 on the other: 3*2 + 2 - 6*1 = 2
    d = all_pairs_distances(complete_bipartite(2, 3))
    cert = kgonal_check(d, 5)
    assert isinstance(cert, ViolationCertificate)
    assert cert.points == (2, 3, 4, 0, 1) and cert.margin == 2 and verify_certificate(d, cert)
    assert margin(d, cert.points, cert.signs) == cert.margin


def test_cycle_passes():
    d = all_pairs_distances(cycle_graph(9))
    res = kgonal_check(d, 5)
    assert isinstance(res, Pass) and res.conclusive


def test_tampered_certificate_rejected():
    d = all_pairs_distances(complete_bipartite(2, 3))
    cert = kgonal_check(d, 5)
    bad = ViolationCertificate(cert.points, tuple(-s for s in cert.signs[:-1]) + (1,), cert.margin)
    assert not verify_certificate(d, bad)
    wrong_margin = ViolationCertificate(cert.points, cert.signs, cert.margin + 1)
    assert not verify_certificate(d, wrong_margin)


def test_random_mode_needs_seed_and_is_deterministic():
    d = all_pairs_distances(complete_bipartite(3, 4))
    with pytest.raises(ValueError):
        kgonal_check(d, 5, mode="random")
    a = kgonal_check(d, 5, mode="random", seed=7, iters=10_000)
    b = kgonal_check(d, 5, mode="random", seed=7, iters=10_000)
    assert a == b and a.evaluations == b.evaluations <= 10_000
    assert a.to_dict()["evaluations"] == a.evaluations


def test_certificate_roundtrip():
    d = all_pairs_distances(complete_bipartite(2, 3))
    cert = kgonal_check(d, 5, graph_id="K23")
    again = ViolationCertificate.from_dict(cert.to_dict())
    assert again == cert and verify_certificate(d, again)


@settings(max_examples=40, deadline=None)
@given(connected_graphs(max_n=9))
def test_exhaustive_matches_brute_force(g):
    d = all_pairs_distances(g)
    res = kgonal_check(d, 5)
    if g.n < 5:
        assert isinstance(res, Pass)
        return
    best = brute_force_max_margin(d, 5)
    if best > 0:
        assert isinstance(res, ViolationCertificate) and verify_certificate(d, res)
    else:
        assert isinstance(res, Pass)


@settings(max_examples=15, deadline=None)
@given(connected_graphs(max_n=8))
def test_seven_gonal_exhaustive_matches_brute_force(g):
    d = all_pairs_distances(g)
    res = kgonal_check(d, 7)
    if g.n < 7:
        assert isinstance(res, Pass)
        return
    assert isinstance(res, ViolationCertificate) == (brute_force_max_margin(d, 7) > 0)


def test_seven_gonal_implied_by_pentagonal_on_k23_plus():
    # a 5-gonal violation extends to a 7-gonal one by a +/- pair on a far vertex pair
    d = all_pairs_distances(complete_bipartite(3, 4))
    assert isinstance(kgonal_check(d, 7), ViolationCertificate)
