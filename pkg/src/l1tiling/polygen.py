"""Parametric polyhedra, Cartesian products and exact 4-polytope vertex sets."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from .graphcore import GraphError, PolyhedralGraph, bfs_distances


# ---------------------------------------------------------------- prisms


def prism(n: int) -> PolyhedralGraph:
    if n < 3:
        raise ValueError(f"prism needs n >= 3, got {n}")
    edges = [(i, (i + 1) % n) for i in range(n)]
    edges += [(n + i, n + (i + 1) % n) for i in range(n)]
    edges += [(i, n + i) for i in range(n)]
    faces = [tuple(range(n)), tuple(range(2 * n - 1, n - 1, -1))]
    faces += [(i, (i + 1) % n, n + (i + 1) % n, n + i) for i in range(n)]
    return PolyhedralGraph(2 * n, edges, faces=faces, name=f"prism{n}")


def antiprism(n: int) -> PolyhedralGraph:
    if n < 3:
        raise ValueError(f"antiprism needs n >= 3, got {n}")
    edges = [(i, (i + 1) % n) for i in range(n)]
    edges += [(n + i, n + (i + 1) % n) for i in range(n)]
    edges += [(i, n + i) for i in range(n)] + [(n + i, (i + 1) % n) for i in range(n)]
    faces = [tuple(range(n)), tuple(range(2 * n - 1, n - 1, -1))]
    faces += [(i, (i + 1) % n, n + i) for i in range(n)]
    faces += [(n + i, (i + 1) % n, n + (i + 1) % n) for i in range(n)]
    return PolyhedralGraph(2 * n, edges, faces=faces, name=f"antiprism{n}")


def product(g1: PolyhedralGraph, g2: PolyhedralGraph) -> PolyhedralGraph:
    """Cartesian product; vertex ``(u, x)`` gets index ``u * g2.n + x``.

    Faces are the products of faces with vertices and of edges with edges
    (squares); this is the 2-skeleton of the product complex.
    """
    n2 = g2.n
    idx = lambda u, x: u * n2 + x  # noqa: E731
    edges = [(idx(u, x), idx(v, x)) for u, v in g1.edges for x in range(n2)]
    edges += [(idx(u, x), idx(u, y)) for x, y in g2.edges for u in range(g1.n)]
    faces = []
    for f in g1.faces or []:
        faces += [tuple(idx(u, x) for u in f) for x in range(n2)]
    for f in g2.faces or []:
        faces += [tuple(idx(u, x) for x in f) for u in range(g1.n)]
    for u, v in g1.edges:
        for x, y in g2.edges:
            faces.append((idx(u, x), idx(v, x), idx(v, y), idx(u, y)))
    name = f"{g1.name or 'G'}x{g2.name or 'H'}"
    return PolyhedralGraph(g1.n * n2, edges, faces=faces or None, name=name)


# ---------------------------------------------------------------- Q(sqrt 5)


@total_ordering
@dataclass(frozen=True)
class QuadraticNumber:
    """Exact element ``(a + b*sqrt(5)) / denom`` of Q(sqrt 5) in lowest terms."""

    a: int
    b: int = 0
    denom: int = 1

    def __post_init__(self):
        if self.denom == 0:
            raise ZeroDivisionError("zero denominator")
        g = math.gcd(math.gcd(self.a, self.b), self.denom)
        s = -1 if self.denom < 0 else 1
        object.__setattr__(self, "a", s * self.a // g)
        object.__setattr__(self, "b", s * self.b // g)
        object.__setattr__(self, "denom", s * self.denom // g)

    @classmethod
    def coerce(cls, x) -> "QuadraticNumber":
        if isinstance(x, QuadraticNumber):
            return x
        if isinstance(x, int):
            return cls(x)
        if isinstance(x, Fraction):
            return cls(x.numerator, 0, x.denominator)
        raise TypeError(f"cannot coerce {x!r}")

    def __add__(self, o):
        o = self.coerce(o)
        return QuadraticNumber(self.a * o.denom + o.a * self.denom,
                               self.b * o.denom + o.b * self.denom, self.denom * o.denom)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.denom)

    def __sub__(self, o):
        return self + (-self.coerce(o))

    def __rsub__(self, o):
        return self.coerce(o) - self

    def __mul__(self, o):
        o = self.coerce(o)
        return QuadraticNumber(self.a * o.a + 5 * self.b * o.b, self.a * o.b + self.b * o.a,
                               self.denom * o.denom)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self.coerce(o)
        norm = o.a * o.a - 5 * o.b * o.b
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt 5)")
        conj = QuadraticNumber(o.a * o.denom, -o.b * o.denom, norm)
        return self * conj

    def sign(self) -> int:
        # sign of a + b*sqrt5 (denom > 0): compare a^2 with 5 b^2 when signs differ
        a, b = self.a, self.b
        if a >= 0 and b >= 0:
            return 0 if a == 0 and b == 0 else 1
        if a <= 0 and b <= 0:
            return -1
        if a > 0:  # b < 0
            return 1 if a * a > 5 * b * b else -1
        return 1 if 5 * b * b > a * a else -1

    def __eq__(self, o):
        try:
            o = self.coerce(o)
        except TypeError:
            return NotImplemented
        return (self.a, self.b, self.denom) == (o.a, o.b, o.denom)

    def __lt__(self, o):
        return (self - self.coerce(o)).sign() < 0

    def __hash__(self):
        return hash((self.a, self.b, self.denom))

    def __float__(self):
        return (self.a + self.b * math.sqrt(5)) / self.denom

    def __repr__(self):
        return f"({self.a}+{self.b}r5)/{self.denom}"

    def __str__(self):
        return f"({self.a}+{self.b}*sqrt5)/{self.denom}"


Q = QuadraticNumber
PHI = Q(1, 1, 2)  # golden ratio
HALF = Q(1, 0, 2)


@dataclass
class VertexSet4D:
    points: list[tuple[QuadraticNumber, ...]]
    name: str = ""

    def __len__(self):
        return len(self.points)

    def sqdist(self, i: int, j: int) -> QuadraticNumber:
        p, q = self.points[i], self.points[j]
        s = Q(0)
        for a, b in zip(p, q):
            t = a - b
            s = s + t * t
        return s

    def min_sqdist(self) -> QuadraticNumber:
        return min(self.sqdist(i, j) for i in range(len(self)) for j in range(i + 1, len(self)))


def _even_permutations(k: int):
    for perm in itertools.permutations(range(k)):
        inv = sum(1 for i in range(k) for j in range(i + 1, k) if perm[i] > perm[j])
        if inv % 2 == 0:
            yield perm


def _signed(vec):
    nz = [i for i, x in enumerate(vec) if x != 0]
    for signs in itertools.product((1, -1), repeat=len(nz)):
        out = list(vec)
        for i, s in zip(nz, signs):
            out[i] = out[i] * s
        yield tuple(out)


def cell600() -> VertexSet4D:
    """The 120 unit-circumradius vertices of the 600-cell, exact in Q(sqrt 5)."""
    one, zero = Q(1), Q(0)
    pts = set()
    for i in range(4):
        for s in (1, -1):
            v = [zero] * 4
            v[i] = Q(s)
            pts.add(tuple(v))
    for v in _signed((HALF, HALF, HALF, HALF)):
        pts.add(v)
    base = (PHI * HALF, HALF, (PHI - one) * HALF, zero)  # (phi, 1, 1/phi, 0) / 2
    for perm in _even_permutations(4):
        for v in _signed(base):
            pts.add(tuple(v[perm[i]] for i in range(4)))
    pts = sorted(pts)
    if len(pts) != 120:
        raise GraphError(f"600-cell construction produced {len(pts)} points")
    return VertexSet4D(pts, "600-cell")


def snub24cell() -> VertexSet4D:
    """Snub 24-cell: the 96 vertices of the 600-cell off the inscribed 24-cell."""
    pts = [p for p in cell600().points if not _is_24cell_vertex(p)]
    if len(pts) != 96:
        raise GraphError(f"snub 24-cell construction produced {len(pts)} points")
    return VertexSet4D(pts, "snub 24-cell")


def _is_24cell_vertex(p) -> bool:
    # the 24 points (+-1,0,0,0) and (+-1/2,+-1/2,+-1/2,+-1/2)
    return all(c.b == 0 for c in p)


def skeleton(vs: VertexSet4D) -> PolyhedralGraph:
    """Minimum-distance graph; every triangle is recorded as a 2-face."""
    n = len(vs)
    sq = {(i, j): vs.sqdist(i, j) for i in range(n) for j in range(i + 1, n)}
    t = min(sq.values())
    edges = [e for e, v in sq.items() if v == t]
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    faces = [(u, v, w) for u, v in edges for w in adj[u] & adj[v] if w > v]
    g = PolyhedralGraph(n, edges, faces=faces, name=vs.name)
    if (bfs_distances(g.adj, 0) < 0).any():
        raise GraphError(f"{vs.name} skeleton is disconnected")
    return g


def _decagon_rings(g: PolyhedralGraph, vs: VertexSet4D):
    """Two disjoint great-circle decagons lying in orthogonal planes."""
    n = g.n
    zero = Q(0)

    def dot(i, j):
        return sum((a * b for a, b in zip(vs.points[i], vs.points[j])), zero)

    adj = g.adj
    # a great decagon through edge (u, v) continues w = (phi) v - u ... found
    # combinatorially: the unique path where consecutive triples span a plane
    # through the origin.
    def ring_from(u, v):
        ring = [u, v]
        while len(ring) < 11:
            a, b = ring[-2], ring[-1]
            nxt = [w for w in adj[b] if w != a and _coplanar_origin(vs, a, b, w)]
            if len(nxt) != 1:
                return None
            ring.append(nxt[0])
        return ring[:10] if ring[10] == ring[0] else None

    rings = []
    for u, v in g.edges:
        r = ring_from(u, v)
        if r is not None:
            rings.append(tuple(r))
    for r1 in rings:
        for r2 in rings:
            if set(r1) & set(r2):
                continue
            if all(dot(i, j) == zero for i in r1 for j in r2):
                return sorted(r1), sorted(r2)
    raise GraphError("no orthogonal decagon pair found")


def _coplanar_origin(vs, a, b, c) -> bool:
    # c in span(a, b): all 3x3 minors of the 3x4 matrix [a; b; c] vanish
    m = [vs.points[a], vs.points[b], vs.points[c]]
    for cols in itertools.combinations(range(4), 3):
        x = [[m[r][k] for k in cols] for r in range(3)]
        det = (x[0][0] * (x[1][1] * x[2][2] - x[1][2] * x[2][1])
               - x[0][1] * (x[1][0] * x[2][2] - x[1][2] * x[2][0])
               + x[0][2] * (x[1][0] * x[2][1] - x[1][1] * x[2][0]))
        if det != 0:
            return False
    return True


def grand_antiprism() -> VertexSet4D:
    """600-cell minus two orthogonal great decagons (100 vertices)."""
    vs = cell600()
    g = skeleton(vs)
    r1, r2 = _decagon_rings(g, vs)
    drop = set(r1) | set(r2)
    pts = [p for i, p in enumerate(vs.points) if i not in drop]
    if len(pts) != 100:
        raise GraphError(f"grand antiprism construction produced {len(pts)} points")
    return VertexSet4D(pts, "grand antiprism")
