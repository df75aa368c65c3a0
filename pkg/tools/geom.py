"""Float geometry used only to author net files: Wythoff orbits, lattice
quotients and Delaunay cell complexes. Nothing here is imported by the
library; its output is validated combinatorially after the fact."""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np
from scipy.spatial import ConvexHull, Delaunay, cKDTree

TOL = 1e-6


def reflect(points, normal, offset):
    """Reflect in the hyperplane ``normal . x = offset``."""
    n = np.asarray(normal, float)
    n = n / np.linalg.norm(n)
    off = offset / np.linalg.norm(normal)
    s = points @ n - off
    return points - 2 * s[:, None] * n[None, :]


def dedupe(points, tol=TOL):
    points = np.asarray(points)
    if not len(points):
        return points
    key = np.round(points / tol).astype(np.int64)
    _, idx = np.unique(key, axis=0, return_index=True)
    return points[np.sort(idx)]


def wythoff_orbit(mirrors, ringed, box):
    """Orbit of the Wythoff point for ``ringed`` mirrors, clipped to ``|x|_inf <= box``.

    Returns the points rescaled to edge length 1 and the scale factor used.

    ``mirrors`` is a list of (normal, offset). The seed lies on every unringed
    mirror and at equal distance from every ringed one, inside the simplex.
    """
    dim = len(mirrors[0][0])
    normals = np.array([np.asarray(m[0], float) / np.linalg.norm(m[0]) for m in mirrors])
    offsets = np.array([m[1] / np.linalg.norm(m[0]) for m in mirrors])
    # the simplex interior: choose signs from its centroid
    verts = []
    for skip in range(len(mirrors)):
        rows = [i for i in range(len(mirrors)) if i != skip]
        verts.append(np.linalg.solve(normals[rows], offsets[rows]))
    centroid = np.mean(verts, axis=0)
    side = np.sign(normals @ centroid - offsets)
    # unknowns: point p (dim) and distance t; constraints n_i.p - o_i = side_i * t (ringed) or 0
    A = np.zeros((len(mirrors), dim + 1))
    b = np.zeros(len(mirrors))
    for i in range(len(mirrors)):
        A[i, :dim] = normals[i]
        b[i] = offsets[i]
        if i in ringed:
            A[i, dim] = -side[i]
    sol = np.linalg.lstsq(A, b, rcond=None)[0]
    # normalise so t = 1/2 -> edge length 1
    p, t = sol[:dim], sol[dim]
    if abs(t) < 1e-12:
        raise ValueError("degenerate ringing")
    if not np.allclose(A @ sol, b, atol=1e-9):
        raise ValueError("inconsistent Wythoff system")
    pts = p[None, :]
    while True:
        new = [pts]
        for nrm, off in zip(normals, offsets):
            new.append(reflect(pts, nrm, off))
        nxt = dedupe(np.vstack(new))
        nxt = nxt[(np.abs(nxt) <= box + TOL).all(axis=1)]
        if len(nxt) == len(pts):
            break
        pts = nxt
    scale = 1 / (2 * abs(t))  # edge length 1
    return pts * scale, scale


def reduce_mod_lattice(points, L):
    """Split points into (fractional remainder key, integer translation)."""
    Linv = np.linalg.inv(L)
    f = points @ Linv
    t = np.floor(f + 1e-7).astype(int)
    r = f - t
    r[np.abs(r - 1) < 1e-7] = 0
    return r, t


def motif_of(points, L):
    """Points of the fundamental cell (fractional coords in [0,1))."""
    r, t = reduce_mod_lattice(points, L)
    return dedupe(r @ L)


def tile(motif, L, reach):
    dim = L.shape[0]
    shifts = np.array(list(itertools.product(range(-reach, reach + 1), repeat=dim)))
    big = (motif[None, :, :] + (shifts @ L)[:, None, :]).reshape(-1, dim)
    return big


class Locator:
    """Map Cartesian points back to (motif index, translation)."""

    def __init__(self, motif, L):
        self.L = L
        self.motif = motif
        r, t = reduce_mod_lattice(motif, L)
        assert (t == 0).all(), "motif must lie in the fundamental cell"
        self.tree = cKDTree(r @ L)

    def __call__(self, x):
        r, t = reduce_mod_lattice(np.atleast_2d(x), self.L)
        dist, idx = self.tree.query(r @ self.L)
        if (dist > 1e-5).any():
            raise KeyError(f"point {x} is not a lattice translate of a motif point")
        return idx, t


def unit_edges(motif, L, length=1.0, reach=2):
    """Quotient edges (i, j, t) between points at distance ``length``."""
    big = tile(motif, L, reach)
    loc = Locator(motif, L)
    tree = cKDTree(big)
    edges = set()
    for i, p in enumerate(motif):
        for j in tree.query_ball_point(p, length + 1e-6):
            q = big[j]
            dd = np.linalg.norm(q - p)
            if abs(dd - length) < 1e-6:
                jj, t = loc(q)
                edges.add((i, int(jj[0]), tuple(int(x) for x in t[0])))
    return sorted(edges)


def min_distance(motif, L, reach=1):
    big = tile(motif, L, reach)
    tree = cKDTree(big)
    d, _ = tree.query(motif, k=2)
    return d[:, 1].min()


def circumcenter(simplex_pts):
    p0 = simplex_pts[0]
    A = 2 * (simplex_pts[1:] - p0)
    b = (simplex_pts[1:] ** 2).sum(1) - (p0 ** 2).sum()
    return np.linalg.solve(A, b)


def delaunay_complex(motif, L, reach=2, max_radius=4.0):
    """Delaunay cells (cospherical groups of simplices) of a periodic point set.

    Returns ``cells`` (list of (center, vertex index set into ``big``)),
    ``big``, and ``adjacent`` pairs of cell indices sharing a facet.
    """
    big = tile(motif, L, reach)
    dim = L.shape[0]
    tri = Delaunay(big, qhull_options="QJ Qbb Qc")
    centers = []
    for s in tri.simplices:
        try:
            centers.append(circumcenter(big[s]))
        except np.linalg.LinAlgError:
            centers.append(np.full(dim, np.nan))
    centers = np.array(centers)
    radius = np.linalg.norm(centers - big[tri.simplices[:, 0]], axis=1)
    edges_ = big[tri.simplices[:, 1:]] - big[tri.simplices[:, :1]]
    vol = np.abs(np.linalg.det(edges_))
    # joggling leaves zero-volume slivers between differently split faces, and
    # the patch hull carries huge or undefined circumspheres; drop both
    ok = np.isfinite(radius) & (radius < max_radius) & (vol > 1e-8)
    groups = {}
    for si in np.flatnonzero(ok):
        k = tuple(np.round(centers[si] / 1e-5).astype(np.int64))
        groups.setdefault(k, []).append(si)
    cells = []
    for k, sis in groups.items():
        vs = set()
        for si in sis:
            vs.update(tri.simplices[si].tolist())
        cells.append((centers[sis[0]], sorted(vs)))
    # convex face-to-face cells are adjacent iff they share a facet, i.e. at
    # least ``dim`` vertices
    by_vertex = {}
    for ci, (_, vs) in enumerate(cells):
        for v in vs:
            by_vertex.setdefault(v, []).append(ci)
    count = {}
    for v, cs in by_vertex.items():
        for a, b in itertools.combinations(sorted(cs), 2):
            count[(a, b)] = count.get((a, b), 0) + 1
    adjacent = {p for p, c in count.items() if c >= dim}
    return cells, big, adjacent


def cell_edges(points):
    """Edges of the convex polytope (2D polygon or 3D polyhedron) on ``points``."""
    points = np.asarray(points)
    if points.shape[1] == 2:
        h = ConvexHull(points)
        v = list(h.vertices)
        return {(min(a, b), max(a, b)) for a, b in zip(v, v[1:] + v[:1])}, [len(v)]
    h = ConvexHull(points)
    planes = {}
    for simplex, eq in zip(h.simplices, h.equations):
        planes.setdefault(tuple(np.round(eq, 5)), set()).update(simplex.tolist())
    edges = set()
    sizes = []
    for key, vs in planes.items():
        vs = sorted(vs)
        normal = np.array(key[:3])
        c = points[vs].mean(axis=0)
        e1 = points[vs[0]] - c
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(normal, e1)
        ang = [math.atan2((points[u] - c) @ e2, (points[u] - c) @ e1) for u in vs]
        ring = [u for _, u in sorted(zip(ang, vs))]
        sizes.append(len(ring))
        for a, b in zip(ring, ring[1:] + ring[:1]):
            edges.add((min(a, b), max(a, b)))
    return edges, sorted(sizes)


def periodic_complex(motif, L, reach=2):
    """Primal quotient edges (Delaunay cell edges), dual motif and dual edges.

    Cells are identified modulo ``L`` by their circumcentres.
    """
    cells, big, adjacent = delaunay_complex(motif, L, reach)
    loc = Locator(motif, L)
    dim = L.shape[0]
    centers = np.array([c for c, _ in cells])
    r, t = reduce_mod_lattice(centers, L)
    central = [i for i in range(len(cells)) if (t[i] == 0).all()]
    dual_motif = centers[central]
    dloc = Locator(dual_motif, L)
    # only trust cells well inside the patch
    span = np.abs(centers @ np.linalg.inv(L)).max(axis=1)
    inner = span < reach - 0.5
    primal = set()
    census = {}
    for ci in range(len(cells)):
        if not inner[ci]:
            continue
        c, vs = cells[ci]
        pts = big[vs]
        es, sizes = cell_edges(pts)
        if ci in central:
            census.setdefault((len(vs), tuple(sizes)), 0)
            census[(len(vs), tuple(sizes))] += 1
        for a, b in es:
            ia, ta = loc(pts[a])
            ib, tb = loc(pts[b])
            if (ta == 0).all():
                primal.add((int(ia[0]), int(ib[0]), tuple(int(x) for x in (tb - ta)[0])))
            if (tb == 0).all():
                primal.add((int(ib[0]), int(ia[0]), tuple(int(x) for x in (ta - tb)[0])))
    dual = set()
    cpos = {ci: k for k, ci in enumerate(central)}
    for a, b in adjacent:
        for x, y in ((a, b), (b, a)):
            if x in cpos and inner[y]:
                j, ty = dloc(centers[y])
                dual.add((cpos[x], int(j[0]), tuple(int(v) for v in ty[0])))
    return sorted(primal), dual_motif, sorted(dual), census


def frac_coords(points, L, denom=1000):
    """Rational approximations of fractional coordinates (documentation only)."""
    f = points @ np.linalg.inv(L)
    return [tuple(Fraction(float(x)).limit_denominator(denom) % 1 for x in row) for row in f]


def rotation_orbit(mirrors, p, box):
    """Orbit of ``p`` under the orientation-preserving (even) subgroup."""
    normals = [np.asarray(m[0], float) for m in mirrors]
    offsets = [float(m[1]) for m in mirrors]
    layers = {0: np.atleast_2d(np.asarray(p, float)), 1: np.zeros((0, len(p)))}
    while True:
        grown = False
        nxt = {}
        for par in (0, 1):
            cand = dedupe(np.vstack([layers[par]] + [reflect(layers[1 - par], n_, o_)
                                                      for n_, o_ in zip(normals, offsets)]))
            cand = cand[(np.abs(cand) <= box + TOL).all(axis=1)]
            if len(cand) != len(layers[par]):
                grown = True
            nxt[par] = cand
        layers = nxt
        if not grown:
            return layers[0]
