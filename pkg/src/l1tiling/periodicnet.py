"""Periodic nets as labelled quotient graphs, finite patches and layer generators."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Sequence

import numpy as np

from .graphcore import GraphError, PolyhedralGraph, bfs_distances, isomorphic, rooted_ball

DEFAULT_VERTEX_CAP = 10**6


@dataclass
class PeriodicNet:
    """``edges`` holds ``(i, j, t)`` meaning vertex ``i`` in cell 0 is joined to
    vertex ``j`` in cell ``t``; the list is closed under reversal."""

    dim: int
    names: list[str]
    frac: list[tuple[Fraction, ...]]
    edges: list[tuple[int, int, tuple[int, ...]]]
    name: str = ""
    meta: dict[str, str] = field(default_factory=dict)
    window: bool = False

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise GraphError(f"net dimension must be 2 or 3, got {self.dim}")
        if not self.names:
            raise GraphError("net has an empty motif")
        zero = (0,) * self.dim
        closed = set()
        for i, j, t in self.edges:
            t = tuple(int(x) for x in t)
            if len(t) != self.dim:
                raise GraphError(f"edge ({i}, {j}, {t}) has wrong translation length")
            if i == j and t == zero:
                raise GraphError(f"loop edge at motif vertex {self.names[i]}")
            closed.add((i, j, t))
            closed.add((j, i, tuple(-x for x in t)))
        self.edges = sorted(closed)
        self._nbrs = [[] for _ in self.names]
        for i, j, t in self.edges:
            self._nbrs[i].append((j, t))

    @property
    def motif_size(self) -> int:
        return len(self.names)

    def neighbors(self, key):
        i, t = key
        return [(j, tuple(a + b for a, b in zip(t, s))) for j, s in self._nbrs[i]]

    def degree(self, i: int) -> int:
        return len(self._nbrs[i])

    def to_text(self) -> str:
        out = [f"net {self.name or 'anon'}", f"dim {self.dim}"]
        for k, v in self.meta.items():
            out.append(f"meta {k} {v}")
        for nm, fr in zip(self.names, self.frac):
            out.append(f"vertex {nm} " + " ".join(str(x) for x in fr))
        for i, j, t in self.edges:
            if (i, t) <= (j, tuple(-x for x in t)):
                out.append(f"edge {self.names[i]} {self.names[j]} " + " ".join(map(str, t)))
        return "\n".join(out) + "\n"


def parse_net(text: str) -> PeriodicNet:
    """Parse the ``.net`` format; reversed edges are added automatically."""
    name, dim = "", None
    names, frac, raw_edges, meta = [], [], [], {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "net":
                name = tok[1]
            elif tok[0] == "dim":
                dim = int(tok[1])
            elif tok[0] == "vertex":
                if dim is None:
                    raise GraphError("'dim' must precede vertices")
                if len(tok) != 2 + dim:
                    raise GraphError(f"vertex needs {dim} coordinates")
                if tok[1] in names:
                    raise GraphError(f"duplicate vertex {tok[1]}")
                names.append(tok[1])
                frac.append(tuple(Fraction(x) for x in tok[2:]))
            elif tok[0] == "edge":
                if dim is None or len(tok) != 3 + dim:
                    raise GraphError("edge needs two vertex names and a translation")
                raw_edges.append((lineno, tok[1], tok[2], tuple(int(x) for x in tok[3:])))
            elif tok[0] == "meta":
                meta[tok[1]] = " ".join(tok[2:])
            else:
                raise GraphError(f"unknown record {tok[0]!r}")
        except (IndexError, ValueError, ZeroDivisionError) as exc:
            raise GraphError(f"line {lineno}: {exc}") from exc
    if dim is None:
        raise GraphError("missing 'dim' record")
    if not names:
        raise GraphError("net has an empty motif")
    index = {nm: i for i, nm in enumerate(names)}
    edges = []
    for lineno, a, b, t in raw_edges:
        if a not in index or b not in index:
            raise GraphError(f"line {lineno}: dangling vertex reference {a if a not in index else b}")
        if a == b and not any(t):
            raise GraphError(f"line {lineno}: loop edge at {a}")
        edges.append((index[a], index[b], t))
    return PeriodicNet(dim, names, frac, edges, name=name, meta=meta)


# ---------------------------------------------------------------- patches


@dataclass
class Patch:
    """BFS ball of radius ``R`` around ``keys[0]``; vertices are in BFS order,
    so the core (distance <= ``r``) is a prefix of length ``core_size``."""

    graph: PolyhedralGraph
    keys: list[Hashable]
    depth: np.ndarray
    R: int
    r: int
    note: str = ""
    split: Callable | None = None  # key -> (vertex type, lattice vector); None for net keys

    def lattice_key(self, key):
        return self.split(key) if self.split is not None else key

    @property
    def core_size(self) -> int:
        return int(np.searchsorted(self.depth, self.r, side="right"))

    @property
    def core(self) -> list[int]:
        return list(range(self.core_size))

    def core_metric(self) -> np.ndarray:
        """Exact infinite-graph distances between core vertices."""
        return self.metric(self.r)

    def metric(self, radius: int) -> np.ndarray:
        """Patch distances on the ball of ``radius`` around the root.

        Exact for ``radius <= R // 2``: if ``d(c,u) + d(c,v) <= R`` every
        u-v geodesic of the infinite graph stays within distance ``R`` of
        the root, hence inside the patch.
        """
        if radius > self.R // 2:
            raise ValueError(f"radius {radius} exceeds the exact range R//2 = {self.R // 2}")
        k = int(np.searchsorted(self.depth, radius, side="right"))
        adj = self.graph.adj
        d = np.empty((k, k), dtype=np.int64)
        for u in range(k):
            d[u] = bfs_distances(adj, u)[:k]
        return d


def bfs_patch(neighbors: Callable, root, R: int, r: int | None = None, cap: int = DEFAULT_VERTEX_CAP,
              note: str = "", split: Callable | None = None) -> Patch:
    index = {root: 0}
    keys = [root]
    depth = [0]
    q = deque([root])
    while q:
        u = q.popleft()
        du = depth[index[u]]
        if du == R:
            continue
        for w in neighbors(u):
            if w not in index:
                if len(keys) >= cap:
                    raise GraphError(f"patch exceeds vertex cap {cap}")
                index[w] = len(keys)
                keys.append(w)
                depth.append(du + 1)
                q.append(w)
    edges = set()
    for u in keys:
        iu = index[u]
        for w in neighbors(u):
            iw = index.get(w)
            if iw is not None and iu < iw:
                edges.add((iu, iw))
    g = PolyhedralGraph(len(keys), sorted(edges), labels={i: k for i, k in enumerate(keys)})
    return Patch(g, keys, np.array(depth), R, R // 3 if r is None else r, note, split)


def expand_patch(net: PeriodicNet, R: int, base: int = 0, cap: int = DEFAULT_VERTEX_CAP) -> Patch:
    """Ball of radius ``R`` around motif vertex ``base`` in cell 0; core radius ``R // 3``."""
    if R < 3:
        raise ValueError("expand_patch needs R >= 3")
    return bfs_patch(net.neighbors, (base, (0,) * net.dim), R, cap=cap)


def ball(net: PeriodicNet, base: int, r: int) -> PolyhedralGraph:
    """Rooted r-ball of the infinite graph at motif vertex ``base``."""
    p = bfs_patch(net.neighbors, (base, (0,) * net.dim), r, r=r)
    b = rooted_ball(p.graph, 0, r)
    return b


def vertex_homogeneous(net: PeriodicNet, r: int = 2):
    """Whether every motif vertex has the same rooted r-ball up to isomorphism.

    Returns ``(True, classes)`` or ``(False, classes)`` where ``classes`` groups
    motif indices by ball type.
    """
    balls = [ball(net, i, r) for i in range(net.motif_size)]
    classes: list[list[int]] = []
    for i, b in enumerate(balls):
        for cls in classes:
            rep = balls[cls[0]]
            if rep.n == b.n and len(rep.edges) == len(b.edges) and isomorphic(rep, b, cap=10**5)[0]:
                cls.append(i)
                break
        else:
            classes.append([i])
    return len(classes) == 1, classes


def nets_isomorphic(a: PeriodicNet, b: PeriodicNet, r: int = 2) -> bool:
    """Core isomorphism: both nets realise the same set of rooted r-ball types."""
    ba = [ball(a, i, r) for i in range(a.motif_size)]
    bb = [ball(b, i, r) for i in range(b.motif_size)]

    def covered(xs, ys):
        for x in xs:
            if not any(x.n == y.n and len(x.edges) == len(y.edges) and isomorphic(x, y, cap=10**5)[0]
                       for y in ys):
                return False
        return True

    return covered(_distinct(ba), bb) and covered(_distinct(bb), ba)


def _distinct(balls):
    out = []
    for b in balls:
        if not any(b.n == o.n and len(b.edges) == len(o.edges) and isomorphic(b, o, cap=10**5)[0] for o in out):
            out.append(b)
    return out


# ---------------------------------------------------------------- layer generators


def _check_word(seq: str):
    if not seq or set(seq) - {"a", "b"}:
        raise ValueError(f"stacking word must be a nonempty a/b string, got {seq!r}")


def kelvin_net(seq: str, elongated: bool = False) -> PeriodicNet:
    """Close-packed triangular layers; letter ``a``/``b`` shifts the next layer by +o / -o.

    Positions of layer k are ``(i, j) + p_k * o`` with ``o = (a1 + a2) / 3``.
    Consecutive layers span a slab of tetrahedra and octahedra. With
    ``elongated`` every layer is repeated straight above itself, adding a slab
    of triangular prisms.
    """
    _check_word(seq)
    steps = []
    for ch in seq:
        steps.append(1 if ch == "a" else -1)
        if elongated:
            steps.append(0)
    L = len(steps)
    p = [0]
    for s in steps:
        p.append(p[-1] + s)
    names = [f"L{k}" for k in range(L)]
    frac = [(Fraction(p[k], 3) % 1, Fraction(p[k], 3) % 1, Fraction(k, L)) for k in range(L)]
    edges = []
    for k in range(L):
        for t in ((1, 0), (0, 1), (1, -1)):
            edges.append((k, k, (t[0], t[1], 0)))
        s = steps[k]
        nxt, dz = (k + 1, 0) if k + 1 < L else (0, 1)
        if s == 0:
            offsets = [(0, 0)]
        elif s == 1:
            offsets = [(0, 0), (-1, 0), (0, -1)]
        else:
            offsets = [(0, 0), (1, 0), (0, 1)]
        for ox, oy in offsets:
            edges.append((k, nxt, (ox, oy, dz)))
    kind = "elongated Kelvin" if elongated else "Kelvin"
    return PeriodicNet(3, names, frac, edges, name=f"kelvin-{seq}{'-el' if elongated else ''}",
                       meta={"family": kind, "word": seq, "period_layers": str(L),
                             "c_shift": f"{p[-1]}/3 (a1+a2)"})


def grunbaum_net(seq: str, elongated: bool = False) -> PeriodicNet:
    """Square-grid planes joined by slabs of lying triangular prisms.

    Letter ``a`` gives a slab whose prism axes run along y (next plane shifted
    by half a cell in x), ``b`` one with axes along x. ``elongated`` inserts a
    slab of cubes after every prism slab.
    """
    _check_word(seq)
    steps = []
    for ch in seq:
        steps.append((1, 0) if ch == "a" else (0, 1))
        if elongated:
            steps.append((0, 0))
    L = len(steps)
    off = [(0, 0)]
    for s in steps:
        off.append((off[-1][0] + s[0], off[-1][1] + s[1]))
    names = [f"P{k}" for k in range(L)]
    frac = [(Fraction(off[k][0], 2) % 1, Fraction(off[k][1], 2) % 1, Fraction(k, L)) for k in range(L)]
    edges = []
    for k in range(L):
        edges.append((k, k, (1, 0, 0)))
        edges.append((k, k, (0, 1, 0)))
        nxt, dz = (k + 1, 0) if k + 1 < L else (0, 1)
        sx, sy = steps[k]
        # a vertex at 2t + off_k joins 2t' + off_{k+1} at position 2t + off_k + delta
        if (sx, sy) == (0, 0):
            deltas = [(0, 0)]
        elif sx:
            deltas = [(1, 0), (-1, 0)]
        else:
            deltas = [(0, 1), (0, -1)]
        for dx, dy in deltas:
            tx = (off[k][0] + dx - off[k + 1][0]) // 2
            ty = (off[k][1] + dy - off[k + 1][1]) // 2
            edges.append((k, nxt, (tx, ty, dz)))
    kind = "elongated Grunbaum" if elongated else "Grunbaum"
    return PeriodicNet(3, names, frac, edges, name=f"grunbaum-{seq}{'-el' if elongated else ''}",
                       meta={"family": kind, "word": seq, "period_layers": str(L),
                             "c_shift": f"({off[-1][0]}/2, {off[-1][1]}/2)"})


# ---------------------------------------------------------------- non-compact partitions


NONCOMPACT_KINDS = ("A19", "A19-perp", "A20", "A22", "A23", "par-type", "perp-type", "chess-type")


def _grid_nbrs(key):
    x, y = key
    return [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)]


def _tri_nbrs(key):
    x, y = key
    return [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1), (x + 1, y - 1), (x - 1, y + 1)]


def _elongated_tri_nbrs(key):
    # 3^3.4^2: rows y; rows 2m -> 2m+1 are square strips, 2m+1 -> 2m+2 triangle strips
    x, y = key
    out = [(x + 1, y), (x - 1, y)]
    out.append((x, y + 1))
    out.append((x, y - 1))
    if y % 2:  # triangle strip above
        out.append((x - 1, y + 1))
    else:  # triangle strip below
        out.append((x + 1, y - 1))
    return out


def _z3_nbrs(key):
    x, y, z = key
    return [(x + 1, y, z), (x - 1, y, z), (x, y + 1, z), (x, y - 1, z), (x, y, z + 1), (x, y, z - 1)]


def noncompact_patch(kind: str, R: int, n: int = 4) -> Patch:
    """Finite ball of the skeleton of a non-compact partition.

    ``A19``/``A19-perp``: infinite prisms over the square grid, skeleton Z^2.
    ``A20``: square grid with a tube C_n x P_Z standing on every other row strip
    (the tube's base edge spans the strip); each tube adds its own ring.
    ``A22``/``A23``: infinite antiprisms (and prisms) over 3^6 and 3^3.4^2;
    the skeleton is the base tiling.
    ``par-type``/``perp-type``/``chess-type``: cubes with square tubes
    C_4 x P_Z; every lattice point and unit edge is present, skeleton Z^3.
    Balls are exact in every direction: the BFS runs on the infinite graph.
    """
    if R < 3:
        raise ValueError("noncompact_patch needs R >= 3")
    if kind in ("A19", "A19-perp"):
        return bfs_patch(_grid_nbrs, (0, 0), R, note="half-space over (4^4); periodic in the plane only",
                         split=_plain_split)
    if kind == "A22":
        return bfs_patch(_tri_nbrs, (0, 0), R, note="half-space over (3^6); periodic in the plane only",
                         split=_plain_split)
    if kind == "A23":
        return bfs_patch(_elongated_tri_nbrs, (0, 0), R, note="half-space over (3^3.4^2)",
                         split=_row_pair_split)
    if kind in ("par-type", "perp-type", "chess-type"):
        return bfs_patch(_z3_nbrs, (0, 0, 0), R, note=f"{kind}: cubes and square tubes; skeleton Z^3",
                         split=_plain_split)
    if kind == "A20":
        if n < 3:
            raise ValueError("A20 needs n >= 3")
        return bfs_patch(_a20_neighbors(n), ("b", 0, 0), R,
                         note=f"A-20 with C_{n} tubes on even row strips; no periodicity across tubes' rings",
                         split=_a20_split)
    raise ValueError(f"unknown non-compact kind {kind!r}; expected one of {NONCOMPACT_KINDS}")


def _plain_split(key):
    return 0, key


def _row_pair_split(key):
    x, y = key
    return y % 2, (x, y - y % 2)


def _a20_split(key):
    if key[0] == "b":
        _, x, y = key
        return ("b", y % 2), (x, y - y % 2)
    _, j, x, k = key
    return ("t", k), (x, j)


def _a20_neighbors(n):
    def nb(key):
        if key[0] == "b":
            _, x, y = key
            out = [("b", x + 1, y), ("b", x - 1, y), ("b", x, y + 1), ("b", x, y - 1)]
            if n > 2:
                # tube on strip j (j even) has ring b(x,j) b(x,j+1) t1 ... t_{n-2}
                if y % 2 == 0:
                    out.append(("t", y, x, n - 2))
                else:
                    out.append(("t", y - 1, x, 1))
            return out
        _, j, x, k = key
        out = [("t", j, x + 1, k), ("t", j, x - 1, k)]
        out.append(("b", x, j + 1) if k == 1 else ("t", j, x, k - 1))
        out.append(("b", x, j) if k == n - 2 else ("t", j, x, k + 1))
        return out

    return nb
