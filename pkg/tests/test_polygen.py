import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from l1tiling.graphcore import diameter, euler_characteristic
from l1tiling.polygen import (QuadraticNumber, antiprism, cell600, grand_antiprism, prism, product,
                              skeleton, snub24cell)

small = st.integers(-30, 30)
nonzero = st.integers(1, 12)
quads = st.builds(lambda a, b, c: QuadraticNumber(a, b, c), small, small, nonzero)
R5 = math.sqrt(5)


@given(quads, quads)
def test_field_ops_match_floats(x, y):
    fx, fy = float(x), float(y)
    assert math.isclose(float(x + y), fx + fy, abs_tol=1e-9)
    assert math.isclose(float(x * y), fx * fy, rel_tol=1e-9, abs_tol=1e-9)
    assert math.isclose(float(x - y), fx - fy, abs_tol=1e-9)
    if fy != 0:
        assert math.isclose(float(x / y), fx / fy, rel_tol=1e-9, abs_tol=1e-9)
    if abs(fx - fy) > 1e-9:
        assert (x < y) == (fx < fy)


@given(quads)
def test_sign_is_exact(x):
    assert x.sign() == (0 if x == QuadraticNumber(0) else (1 if float(x) > 0 else -1))


def test_golden_ratio_identity():
    phi = QuadraticNumber(1, 1, 2)
    assert phi * phi == phi + 1
    assert QuadraticNumber.coerce(Fraction(3, 6)) == QuadraticNumber(1, 0, 2)


def _float_points(vs):
    return np.array([[float(c) for c in p] for p in vs.points])


@pytest.mark.parametrize("make,counts,deg,diam", [
    (cell600, (120, 720, 1200), 12, 5),
    (snub24cell, (96, 432, 480), 9, 6),
])
def test_polytope_counts(make, counts, deg, diam):
    vs = make()
    g = skeleton(vs)
    assert (g.n, len(g.edges), len(g.faces)) == counts
    assert set(g.degrees()) == {deg}
    assert diameter(g) == diam


def test_grand_antiprism_counts():
    vs = grand_antiprism()
    g = skeleton(vs)
    assert (g.n, len(g.edges)) == (100, 500) and set(g.degrees()) == {10}
    # all of its vertices are 600-cell vertices
    assert set(vs.points) <= set(cell600().points)


@pytest.mark.parametrize("make", [cell600, snub24cell, grand_antiprism])
def test_edges_are_exact_minimum_distances(make):
    vs = make()
    g = skeleton(vs)
    m = vs.min_sqdist()
    assert m == QuadraticNumber(3, -1, 2)  # (3 - sqrt5)/2 = 1/phi^2 at circumradius 1
    assert all(vs.sqdist(u, v) == m for u, v in g.edges)
    # float oracle: unit circumradius and the same edge length
    pts = _float_points(vs)
    assert np.allclose((pts ** 2).sum(1), 1.0)
    e = np.array(g.edges)
    assert np.allclose(((pts[e[:, 0]] - pts[e[:, 1]]) ** 2).sum(1), (3 - R5) / 2)


def test_product_counts():
    p = product(prism(5), antiprism(4))
    assert p.n == 80
    assert len(p.edges) == 10 * 16 + 15 * 8


def test_prism_family_errors():
    with pytest.raises(ValueError):
        prism(2)
    assert euler_characteristic(antiprism(3)) == 2
