"""Author the periodic net files under src/l1tiling/data/net/.

Each tiling is built from coordinates (edge length 1), reduced modulo a
translation lattice, and written as a quotient graph. Duals come from the
Delaunay cells of the vertex set, merged by circumsphere; for every uniform
tiling here the Delaunay cells are exactly the tiles (checked: the Delaunay
cell edges coincide with the unit-distance graph).

Run from the repository root: ``python3 tools/make_nets.py``.
"""
from __future__ import annotations

import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
from scipy.optimize import least_squares

sys.path.insert(0, str(Path(__file__).resolve().parent))
from geom import (dedupe, motif_of, periodic_complex, reflect, rotation_orbit,  # noqa: E402
                  unit_edges, wythoff_orbit)

OUT = Path(__file__).resolve().parents[1] / "src" / "l1tiling" / "data" / "net"
s3 = math.sqrt(3)

# ---------------------------------------------------------------- 2D

P6M = [((0, 1), 0), ((-0.5, s3 / 2), 0), ((1, 0), 1)]  # (6,3,2) triangle
P6M_L = np.array([[2, 0], [1, s3]])
P4M = [((0, 1), 0), ((1, -1), 0), ((1, 0), 1)]  # (4,4,2) triangle
P4M_L = np.array([[2, 0], [0, 2]], float)


def wythoff2(mirrors, L, ringed):
    pts, sc = wythoff_orbit(mirrors, set(ringed), 6.0)
    Ls = L * sc
    return motif_of(pts, Ls), Ls


def snub2(mirrors, L):
    """Snub tiling: rotation orbit of a point tuned so all edge kinds are equal."""
    normals = [np.asarray(m[0], float) for m in mirrors]
    offsets = [m[1] for m in mirrors]

    def images(p):
        q = p[None, :]
        out = []
        for i, j in ((0, 1), (1, 2), (2, 0)):
            out.append(reflect(reflect(q, normals[j], offsets[j]), normals[i], offsets[i])[0])
        return out

    def resid(p):
        d = [np.linalg.norm(p - q) for q in images(p)]
        return [d[0] - d[1], d[1] - d[2]]

    sol = least_squares(resid, np.array([0.6, 0.2]), xtol=1e-15, ftol=1e-15, gtol=1e-15)
    p = sol.x
    edge = np.linalg.norm(p - images(p)[0])
    pts = rotation_orbit(mirrors, p, 8.0) / edge
    Ls = L / edge
    return motif_of(pts, Ls), Ls


def elongated_triangular():
    L = np.array([[1, 0], [0.5, 1 + s3 / 2]])
    return motif_of(np.array([[0, 0], [0, 1.0]]), L), L


def tilings2d():
    return {
        "T2.01": ("4.4.4.4", *wythoff2(P4M, P4M_L, [2])),
        "T2.02": ("3.3.3.3.3.3", *wythoff2(P6M, P6M_L, [2])),
        "T2.03": ("6.6.6", *wythoff2(P6M, P6M_L, [0])),
        "T2.04": ("3.6.3.6", *wythoff2(P6M, P6M_L, [1])),
        "T2.05": ("3.4.6.4", *wythoff2(P6M, P6M_L, [0, 2])),
        "T2.06": ("4.8.8", *wythoff2(P4M, P4M_L, [0, 1])),
        "T2.07": ("4.6.12", *wythoff2(P6M, P6M_L, [0, 1, 2])),
        "T2.08": ("3.12.12", *wythoff2(P6M, P6M_L, [0, 1])),
        "T2.09": ("3.3.3.3.6", *snub2(P6M, P6M_L)),
        "T2.10": ("3.3.3.4.4", *elongated_triangular()),
        "T2.11": ("3.3.4.3.4", *snub2(P4M, P4M_L)),
    }


# ---------------------------------------------------------------- 3D

C3 = [((1, 0, 0), 0.5), ((1, -1, 0), 0), ((0, 1, -1), 0), ((0, 0, 1), 0)]
C3_L = np.eye(3)
B3 = [((1, 1, 0), 1), ((1, -1, 0), 0), ((0, 1, -1), 0), ((0, 0, 1), 0)]
B3_L = np.array([[1, 1, 0], [1, 0, 1], [0, 1, 1]], float)


def wythoff3(mirrors, L, ringed):
    pts, sc = wythoff_orbit(mirrors, set(ringed), 3.0)
    Ls = L * sc
    return motif_of(pts, Ls), Ls


def prismatic(motif2, L2):
    m = np.hstack([motif2, np.zeros((len(motif2), 1))])
    L = np.zeros((3, 3))
    L[:2, :2] = L2
    L[2, 2] = 1.0
    return m, L


def kelvin_coords(seq, elongated=False):
    """Close-packed layers; 'a' shifts the next layer by +o, 'b' by -o."""
    o = np.array([0.5, s3 / 6])
    h = math.sqrt(2 / 3)
    pos, z, p = [], 0.0, 0
    for ch in seq:
        pos.append([*(p * o), z])
        p += 1 if ch == "a" else -1
        z += h
        if elongated:
            pos.append([*(p * o), z])
            z += 1.0
    a1, a2 = np.array([1, 0, 0.0]), np.array([0.5, s3 / 2, 0])
    c = np.array([*(p * o), z])
    return np.array(pos), np.array([a1, a2, c])


def grunbaum_coords(seq, elongated=False):
    """Square-grid planes; 'a' slab shifts the next plane by x/2, 'b' by y/2."""
    h = s3 / 2
    pos, z, off = [], 0.0, np.zeros(2)
    for ch in seq:
        pos.append([*off, z])
        off = off + (np.array([0.5, 0]) if ch == "a" else np.array([0, 0.5]))
        z += h
        if elongated:
            pos.append([*off, z])
            z += 1.0
    L = np.array([[1, 0, 0], [0, 1, 0], [*off, z]], float)
    return np.array(pos), L


def pyrochlore():
    """Quarter cubic honeycomb: midpoints of the diamond bonds."""
    L = np.array([[0, 0.5, 0.5], [0.5, 0, 0.5], [0.5, 0.5, 0]])
    m = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]) / 8.0
    edge = np.linalg.norm(m[0] - m[1])
    m = m / edge
    L = L / edge
    return motif_of(m, L), L


def gyrated_pyrochlore():
    """Quarter cubic honeycomb mirrored in every kagome plane normal to [111].

    Along [111] the vertex set has kagome planes (three motif points) and
    triangular planes (one point), alternating. The slab between two
    consecutive kagome planes is kept and its mirror image across the upper
    plane placed above; the two reflections compose to a translation by
    twice the slab height.
    """
    motif, L = pyrochlore()
    n = np.ones(3) / s3
    lev = motif @ n
    vals, counts = np.unique(np.round(lev, 9), return_counts=True)
    k0 = vals[np.argmax(counts)]
    period = abs(L[0] @ n)  # spacing of equivalent planes along n
    k1 = k0 + period
    big = np.vstack([motif + i * L[0] + j * L[1] + k * L[2]
                     for i in range(-4, 5) for j in range(-4, 5) for k in range(-4, 5)])
    bl = big @ n
    slab = big[(bl > k0 - 1e-6) & (bl < k1 + 1e-6)]
    upper = reflect(slab, n, k1)
    ul = upper @ n
    upper = upper[(ul > k1 + 1e-6) & (ul < k0 + 2 * period - 1e-6)]
    pts = np.vstack([slab, upper])
    Lg = np.array([L[0] - L[1], L[1] - L[2], 2 * period * n])
    return motif_of(pts, Lg), Lg


def diamond():
    L = np.array([[0, 0.5, 0.5], [0.5, 0, 0.5], [0.5, 0.5, 0]])
    m = np.array([[0, 0, 0], [0.25, 0.25, 0.25]])
    s = 1 / np.linalg.norm(m[1])
    return motif_of(m * s, L * s), L * s


def bct_l5():
    """Body-centred tetragonal lattice with c/a = 2 (Voronoi cell: elongated dodecahedron)."""
    L = np.array([[1, 0, 0], [0, 1, 0], [0.5, 0.5, 1.0]])
    return np.zeros((1, 3)), L


def _cell(ml):
    m, L = ml
    return motif_of(m, L), L


def partitions3d(t2):
    pr = {k: prismatic(v[1], v[2]) for k, v in t2.items()}
    return {
        "T3.01": wythoff3(C3, C3_L, [0]),
        "T3.02": wythoff3(C3, C3_L, [1, 2]),
        "T3.03": pr["T2.02"],
        "T3.04": pr["T2.03"],
        "T3.05": wythoff3(B3, B3_L, [0]),
        "T3.06": pyrochlore(),
        "T3.07": wythoff3(C3, C3_L, [0, 1]),
        "T3.08": wythoff3(C3, C3_L, [1]),
        "T3.09": wythoff3(C3, C3_L, [0, 1, 2, 3]),
        "T3.10": pr["T2.06"],
        "T3.11": pr["T2.04"],
        "T3.12": pr["T2.09"],
        "T3.13": pr["T2.10"],
        "T3.14": pr["T2.11"],
        "T3.15": pr["T2.08"],
        "T3.16": wythoff3(C3, C3_L, [0, 1, 2]),
        "T3.17": wythoff3(B3, B3_L, [0, 2, 3]),
        "T3.18": wythoff3(C3, C3_L, [0, 2]),
        "T3.19": wythoff3(B3, B3_L, [0, 3]),
        "T3.20": wythoff3(B3, B3_L, [0, 2]),
        "T3.21": pr["T2.05"],
        "T3.22": pr["T2.07"],
        "T3.23": wythoff3(C3, C3_L, [0, 1, 3]),
        "T3.24": _cell(kelvin_coords("ab")),
        "T3.25": _cell(kelvin_coords("a", True)),
        "T3.26": _cell(kelvin_coords("ab", True)),
        "T3.27": _cell(grunbaum_coords("ab")),
        "T3.28": _cell(grunbaum_coords("ab", True)),
        # Table 4
        "T4.29": bct_l5(),
        "T4.30": diamond(),
        "T4.31": _cell(kelvin_coords("aab")),
        "T4.32": _cell(grunbaum_coords("aab")),
        "T4.33": _cell(kelvin_coords("aab", True)),
        "T4.34": _cell(grunbaum_coords("aab", True)),
        "T4.46": gyrated_pyrochlore(),
    }


# ---------------------------------------------------------------- output


def rationals(points, L):
    f = points @ np.linalg.inv(L)
    f = f - np.floor(f + 1e-9)
    out, exact = [], True
    for row in f:
        q = []
        for x in row:
            r = Fraction(float(x)).limit_denominator(144) % 1
            if abs(float(r) - x) > 1e-9 and abs(float(r) - x + 1) > 1e-9:
                exact = False
                r = Fraction(float(x)).limit_denominator(10**4) % 1
            q.append(r)
        out.append(q)
    return out, exact


def census_text(census, dim):
    parts = []
    for (nv, sizes), cnt in sorted(census.items()):
        if dim == 2:
            parts.append(f"{nv}-gon:{cnt}")
        else:
            faces = {}
            for s_ in sizes:
                faces[s_] = faces.get(s_, 0) + 1
            sig = ".".join(f"{k}^{v}" for k, v in sorted(faces.items()))
            parts.append(f"v{nv}[{sig}]:{cnt}")
    return " ".join(parts)


def write_net(path, ident, motif, L, edges, meta):
    dim = L.shape[0]
    fr, exact = rationals(motif, L)
    names = [f"v{i}" for i in range(len(motif))]
    lines = [f"net {ident}", f"dim {dim}"]
    meta = dict(meta)
    meta["coords"] = "exact" if exact else "approximate"
    for k, v in meta.items():
        lines.append(f"meta {k} {v}")
    lines.append("meta lattice " + " ; ".join(" ".join(f"{x:.12g}" for x in row) for row in L))
    for nm, q in zip(names, fr):
        lines.append(f"vertex {nm} " + " ".join(str(x) for x in q))
    seen = set()
    for i, j, t in edges:
        rev = (j, i, tuple(-x for x in t))
        if rev in seen:
            continue
        seen.add((i, j, t))
        lines.append(f"edge {names[i]} {names[j]} " + " ".join(map(str, t)))
    path.write_text("\n".join(lines) + "\n")


def emit(ident, motif, L, meta, unit=True, reach=2):
    primal, dmotif, dual, census = periodic_complex(motif, L, reach=reach)
    if unit:
        ue = unit_edges(motif, L)
        assert set(ue) == set(primal), f"{ident}: Delaunay cell edges differ from unit-distance edges"
    dim = L.shape[0]
    deg = len(primal) / len(motif)
    meta = {"cells": census_text(census, dim), **meta}
    write_net(OUT / f"{ident}.net", ident, motif, L, primal, meta)
    dmeta = {"dual_of": ident, "cells_of_primal": meta["cells"]}
    write_net(OUT / f"{ident}-dual.net", ident + "*", dmotif, L, dual, dmeta)
    print(ident, len(motif), deg, meta["cells"], "| dual", len(dmotif), len(dual) / len(dmotif))


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    t2 = tilings2d()
    for ident, (conf, motif, L) in t2.items():
        emit(ident, motif, L, {"vertex_config": conf}, reach=3)
    for ident, (motif, L) in partitions3d(t2).items():
        unit = ident not in ("T4.29", "T4.30")
        emit(ident, motif, L, {}, unit=unit)


if __name__ == "__main__":
    main()
