"""Author the Platonic and Archimedean solid files under data/poly/.

Vertex coordinates are standard closed forms (floats are fine here: only the
combinatorics is written out). Faces come from the convex hull, merged by
supporting plane. Snub solids are orbits of a point under the rotation
group, with the point tuned until all hull edges have equal length.
"""
from __future__ import annotations

import itertools
import math
import sys
from pathlib import Path

import numpy as np
from scipy.optimize import minimize
from scipy.spatial import ConvexHull
from scipy.spatial.transform import Rotation

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))
from l1tiling.graphcore import PolyhedralGraph, format_poly  # noqa: E402

OUT = Path(__file__).resolve().parents[1] / "src" / "l1tiling" / "data" / "poly"
phi = (1 + math.sqrt(5)) / 2
r2 = math.sqrt(2)


def all_perms(v):
    return {p for p in itertools.permutations(v)}


def even_perms(v):
    return {(v[0], v[1], v[2]), (v[1], v[2], v[0]), (v[2], v[0], v[1])}


def signs(vs):
    out = set()
    for v in vs:
        nz = [i for i, x in enumerate(v) if x != 0]
        for s in itertools.product((1, -1), repeat=len(nz)):
            w = list(v)
            for i, si in zip(nz, s):
                w[i] *= si
            out.add(tuple(w))
    return out


def pts(*groups, perm=all_perms):
    out = set()
    for g in groups:
        for p in perm(g):
            out |= signs([p])
    return np.array(sorted(out), dtype=float)


def hull_complex(p, name):
    p = np.asarray(p, dtype=float)
    h = ConvexHull(p)
    planes = {}
    for simplex, eq in zip(h.simplices, h.equations):
        key = tuple(np.round(eq, 6))
        planes.setdefault(key, set()).update(simplex.tolist())
    faces = []
    for key, vs in planes.items():
        vs = sorted(vs)
        normal = np.array(key[:3])
        c = p[vs].mean(axis=0)
        e1 = p[vs[0]] - c
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(normal, e1)
        ang = [math.atan2((p[v] - c) @ e2, (p[v] - c) @ e1) for v in vs]
        faces.append(tuple(v for _, v in sorted(zip(ang, vs))))
    edges = set()
    for f in faces:
        for a, b in zip(f, f[1:] + f[:1]):
            edges.add((min(a, b), max(a, b)))
    lens = [np.linalg.norm(p[a] - p[b]) for a, b in edges]
    assert max(lens) - min(lens) < 1e-6 * max(lens), (name, min(lens), max(lens))
    return PolyhedralGraph(len(p), sorted(edges), faces=sorted(faces), name=name)


def rotation_group(gens):
    mats = [np.eye(3)]
    frontier = [np.eye(3)]
    while frontier:
        new = []
        for m in frontier:
            for g in gens:
                x = g @ m
                if not any(np.allclose(x, y) for y in mats):
                    mats.append(x)
                    new.append(x)
        frontier = new
    return mats


def snub(group, name, nverts, x0):
    def orbit(v):
        return np.array([m @ v for m in group])

    def loss(v):
        q = orbit(v / np.linalg.norm(v))
        h = ConvexHull(q)
        es = set()
        for s in h.simplices:
            for a, b in itertools.combinations(s, 2):
                es.add((min(a, b), max(a, b)))
        lens = np.array([np.linalg.norm(q[a] - q[b]) for a, b in es])
        short = np.sort(lens)[: int(nverts * 5 / 2)]
        return short.var() / short.mean() ** 2

    res = minimize(loss, x0, method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-20, "maxiter": 20000})
    q = orbit(res.x / np.linalg.norm(res.x))
    assert len(q) == nverts
    return hull_complex(q, name)


def solids():
    t = 1.839286755214161  # tribonacci constant
    oct_rot = rotation_group([Rotation.from_euler("z", 90, degrees=True).as_matrix(),
                              Rotation.from_euler("x", 90, degrees=True).as_matrix()])
    ico_gens = [np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], float),
                Rotation.from_rotvec(np.array([0, 1, phi]) / np.linalg.norm([0, 1, phi]) * 2 * math.pi / 5).as_matrix()]
    ico_rot = rotation_group(ico_gens)
    return {
        "tetrahedron": pts((1, 1, 1), perm=lambda v: {v})[[0, 3, 5, 6]],
        "cube": pts((1, 1, 1)),
        "dodecahedron": np.vstack([pts((1, 1, 1)), pts((0, 1 / phi, phi), perm=even_perms)]),
        "cuboctahedron": pts((1, 1, 0)),
        "icosidodecahedron": np.vstack([pts((0, 0, phi), perm=even_perms),
                                        pts((0.5, phi / 2, phi * phi / 2), perm=even_perms)]),
        "truncated_tetrahedron": np.array([p for p in pts((3, 1, 1)) if sum(x < 0 for x in p) % 2 == 0]),
        "truncated_octahedron": pts((0, 1, 2)),
        "truncated_cube": pts((r2 - 1, 1, 1)),
        "truncated_icosahedron": np.vstack([pts((0, 1, 3 * phi), perm=even_perms),
                                            pts((1, 2 + phi, 2 * phi), perm=even_perms),
                                            pts((phi, 2, 2 * phi + 1), perm=even_perms)]),
        "truncated_dodecahedron": np.vstack([pts((0, 1 / phi, 2 + phi), perm=even_perms),
                                             pts((1 / phi, phi, 2 * phi), perm=even_perms),
                                             pts((phi, 2, phi + 1), perm=even_perms)]),
        "rhombicuboctahedron": pts((1, 1, 1 + r2)),
        "rhombicosidodecahedron": np.vstack([pts((1, 1, phi ** 3), perm=even_perms),
                                             pts((phi ** 2, phi, 2 * phi), perm=even_perms),
                                             pts((2 + phi, 0, phi ** 2), perm=even_perms)]),
        "truncated_cuboctahedron": pts((1, 1 + r2, 1 + 2 * r2)),
        "truncated_icosidodecahedron": np.vstack([
            pts((1 / phi, 1 / phi, 3 + phi), perm=even_perms),
            pts((2 / phi, phi, 1 + 2 * phi), perm=even_perms),
            pts((1 / phi, phi ** 2, 3 * phi - 1), perm=even_perms),
            pts((2 * phi - 1, 2, 2 + phi), perm=even_perms),
            pts((phi, 3, 2 * phi), perm=even_perms)]),
        "snub_cube": (oct_rot, 24, np.array([1, 1 / t, t])),
        "snub_dodecahedron": (ico_rot, 60, np.array([0.3, 0.6, 1.1])),
    }


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, spec in solids().items():
        if isinstance(spec, tuple):
            g = snub(spec[0], name, spec[1], spec[2])
        else:
            g = hull_complex(spec, name)
        assert g.n - len(g.edges) + len(g.faces) == 2, name
        (OUT / f"{name}.poly").write_text(format_poly(g, comment=f"{name}: {g.n} vertices, "
                                                      f"{len(g.edges)} edges, {len(g.faces)} faces"))
        print(name, g.n, len(g.edges), len(g.faces))


if __name__ == "__main__":
    main()
