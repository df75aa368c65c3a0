"""Finite graphs, exact graph metrics, isomorphism and polyhedral duals."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class GraphError(ValueError):
    pass


@dataclass
class PolyhedralGraph:
    """Simple connected graph, optionally carrying 2-faces and coordinates.

    ``faces`` are cyclic vertex sequences; ``coords`` are exact (rational or
    symbolic) tuples that no metric code ever reads.
    """

    n: int
    edges: list[tuple[int, int]]
    faces: list[tuple[int, ...]] | None = None
    coords: dict[int, tuple] | None = None
    labels: dict[int, object] | None = None
    name: str = ""
    _adj: list[list[int]] | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        es = set()
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={self.n}")
            key = (u, v) if u < v else (v, u)
            if key in es:
                raise GraphError(f"multi-edge {key}")
            es.add(key)
        self.edges = sorted(es)
        if self.faces is not None:
            self.faces = [tuple(f) for f in self.faces]
            for f in self.faces:
                if len(set(f)) != len(f) or len(f) < 3:
                    raise GraphError(f"face {f} is not a simple cycle")
                for a, b in zip(f, f[1:] + f[:1]):
                    if ((a, b) if a < b else (b, a)) not in es:
                        raise GraphError(f"face {f} uses non-edge ({a}, {b})")

    @property
    def adj(self) -> list[list[int]]:
        if self._adj is None:
            adj = [[] for _ in range(self.n)]
            for u, v in self.edges:
                adj[u].append(v)
                adj[v].append(u)
            for row in adj:
                row.sort()
            self._adj = adj
        return self._adj

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def edge_set(self) -> set[tuple[int, int]]:
        return set(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self.edge_set()

    def __len__(self):
        return self.n


def from_adjacency(adj: Sequence[Iterable[int]], **kw) -> PolyhedralGraph:
    edges = {(min(u, v), max(u, v)) for u, nb in enumerate(adj) for v in nb}
    return PolyhedralGraph(len(adj), sorted(edges), **kw)


def cycle_graph(n: int) -> PolyhedralGraph:
    return PolyhedralGraph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> PolyhedralGraph:
    return PolyhedralGraph(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> PolyhedralGraph:
    return PolyhedralGraph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def complete_bipartite(a: int, b: int) -> PolyhedralGraph:
    return PolyhedralGraph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


# ---------------------------------------------------------------- metric


def bfs_distances(adj: Sequence[Sequence[int]], source: int) -> np.ndarray:
    n = len(adj)
    dist = np.full(n, -1, dtype=np.int64)
    dist[source] = 0
    q = deque([source])
    while q:
        u = q.popleft()
        du = dist[u] + 1
        for w in adj[u]:
            if dist[w] < 0:
                dist[w] = du
                q.append(w)
    return dist


def all_pairs_distances(g: PolyhedralGraph) -> np.ndarray:
    """Exact shortest-path distance matrix (int64) of a connected graph."""
    n = g.n
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    adj = g.adj
    d = np.empty((n, n), dtype=np.int64)
    for s in range(n):
        row = bfs_distances(adj, s)
        if s == 0 and (row < 0).any():
            v = int(np.flatnonzero(row < 0)[0])
            raise GraphError(f"graph is disconnected: no path between 0 and {v}")
        d[s] = row
    return d


def diameter(g: PolyhedralGraph) -> int:
    if g.n <= 1:
        return 0
    return int(all_pairs_distances(g).max())


def is_bipartite(g: PolyhedralGraph) -> tuple[bool, list[int] | None]:
    """Return ``(True, None)`` or ``(False, odd_cycle)``."""
    color = [-1] * g.n
    parent = [-1] * g.n
    adj = g.adj
    for s in range(g.n):
        if color[s] >= 0:
            continue
        color[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for w in adj[u]:
                if color[w] < 0:
                    color[w] = 1 - color[u]
                    parent[w] = u
                    q.append(w)
                elif color[w] == color[u]:
                    return False, _odd_cycle(parent, u, w)
    return True, None


def _odd_cycle(parent, u, w):
    pu, pw = [u], [w]
    while parent[pu[-1]] >= 0:
        pu.append(parent[pu[-1]])
    while parent[pw[-1]] >= 0:
        pw.append(parent[pw[-1]])
    anc = set(pu)
    for k, x in enumerate(pw):
        if x in anc:
            i = pu.index(x)
            return pu[: i + 1] + pw[:k][::-1]
    raise AssertionError("BFS trees of one component share a root")


def induced_subgraph(g: PolyhedralGraph, vertices: Sequence[int]) -> tuple[PolyhedralGraph, list[int]]:
    vs = list(vertices)
    index = {v: i for i, v in enumerate(vs)}
    edges = [(index[u], index[v]) for u, v in g.edges if u in index and v in index]
    labels = None
    if g.labels is not None:
        labels = {index[v]: g.labels[v] for v in vs if v in g.labels}
    return PolyhedralGraph(len(vs), edges, labels=labels), vs


def rooted_ball(g: PolyhedralGraph, v: int, r: int) -> PolyhedralGraph:
    """Induced subgraph on the vertices within distance ``r`` of ``v``.

    The root becomes vertex 0 and carries the label ``"root"``.
    """
    dist = bfs_distances(g.adj, v)
    order = sorted((int(dist[w]), w) for w in range(g.n) if 0 <= dist[w] <= r)
    ball, _ = induced_subgraph(g, [w for _, w in order])
    ball.labels = {0: "root"}
    return ball


# ---------------------------------------------------------------- isomorphism


def _refine(adj, colors):
    """1-dimensional Weisfeiler-Leman refinement to a stable partition."""
    n = len(adj)
    while True:
        sigs = [(colors[v], tuple(sorted(colors[w] for w in adj[v]))) for v in range(n)]
        table = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [table[s] for s in sigs]
        if len(table) == len(set(colors)):
            return new
        colors = new


def _initial_colors(g: PolyhedralGraph, d: np.ndarray) -> list:
    labels = g.labels or {}
    out = []
    for v in range(g.n):
        hist = tuple(np.bincount(d[v], minlength=1).tolist())
        out.append((str(labels.get(v, "")), len(g.adj[v]), hist))
    return out


def _joint_colors(g1, g2, c1, c2):
    table = {s: i for i, s in enumerate(sorted(set(c1) | set(c2)))}
    return [table[s] for s in c1], [table[s] for s in c2]


def isomorphic(g1: PolyhedralGraph, g2: PolyhedralGraph, cap: int = 200) -> tuple[bool, dict[int, int] | None]:
    """Exact isomorphism test by distance-profile refinement plus backtracking.

    Vertex labels, when present, must be preserved. Returns ``(True, mapping)``
    with ``mapping`` sending vertices of ``g1`` to ``g2``.
    """
    if g1.n > cap or g2.n > cap:
        raise GraphError(f"isomorphism cap {cap} exceeded ({g1.n}, {g2.n})")
    if g1.n != g2.n or len(g1.edges) != len(g2.edges):
        return False, None
    if g1.n == 0:
        return True, {}
    d1, d2 = all_pairs_distances(g1), all_pairs_distances(g2)
    a1, a2 = _joint_colors(g1, g2, _initial_colors(g1, d1), _initial_colors(g2, d2))
    a1, a2 = _joint_refine(g1.adj, g2.adj, a1, a2)
    if sorted(a1) != sorted(a2):
        return False, None
    adj2 = [set(a) for a in g2.adj]
    n = g1.n
    order = _search_order(g1.adj, a1)
    mapping: dict[int, int] = {}
    used = [False] * n

    def consistent(u, x):
        for w, y in mapping.items():
            if d1[u, w] != d2[x, y]:
                return False
        return True

    def rec(k):
        if k == n:
            return True
        u = order[k]
        for x in range(n):
            if used[x] or a2[x] != a1[u] or not consistent(u, x):
                continue
            mapping[u] = x
            used[x] = True
            if rec(k + 1):
                return True
            del mapping[u]
            used[x] = False
        return False

    import sys

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * n + 100))
    try:
        ok = rec(0)
    finally:
        sys.setrecursionlimit(old)
    if not ok:
        return False, None
    for u, v in g1.edges:
        assert mapping[v] in adj2[mapping[u]]
    return True, dict(mapping)


def _joint_refine(adj1, adj2, c1, c2):
    n1 = len(adj1)
    adj = [list(a) for a in adj1] + [[w + n1 for w in a] for a in adj2]
    c = _refine(adj, list(c1) + list(c2))
    return c[:n1], c[n1:]


def _search_order(adj, colors):
    # rarest color class first, then BFS so each new vertex touches mapped ones
    n = len(adj)
    counts = np.bincount(colors)
    start = min(range(n), key=lambda v: (counts[colors[v]], v))
    seen = [False] * n
    order = []
    for s in [start] + list(range(n)):
        if seen[s]:
            continue
        seen[s] = True
        q = deque([s])
        while q:
            u = q.popleft()
            order.append(u)
            for w in sorted(adj[u], key=lambda w: (counts[colors[w]], w)):
                if not seen[w]:
                    seen[w] = True
                    q.append(w)
    return order


# ---------------------------------------------------------------- duality


def euler_characteristic(g: PolyhedralGraph) -> int:
    if g.faces is None:
        raise GraphError("graph has no faces")
    return g.n - len(g.edges) + len(g.faces)


def dual_polyhedron(g: PolyhedralGraph) -> PolyhedralGraph:
    """Combinatorial dual of a closed polyhedral 2-complex.

    Dual vertices are the faces of ``g`` (in order); dual faces are the vertex
    stars of ``g``, cyclically ordered.
    """
    if g.faces is None:
        raise GraphError("dual_polyhedron needs face data")
    edge_faces: dict[tuple[int, int], list[int]] = {e: [] for e in g.edges}
    for fi, f in enumerate(g.faces):
        for a, b in zip(f, f[1:] + f[:1]):
            edge_faces[(a, b) if a < b else (b, a)].append(fi)
    bad = [e for e, fs in edge_faces.items() if len(fs) != 2]
    if bad:
        raise GraphError(f"complex is not closed; edges not on exactly two faces: {bad[:10]}")
    dual_edges = sorted({tuple(sorted(fs)) for fs in edge_faces.values()})
    stars = []
    for v in range(g.n):
        stars.append(_vertex_star(g, v, edge_faces))
    return PolyhedralGraph(len(g.faces), dual_edges, faces=stars,
                           name=(g.name + "*") if g.name else "")


def _vertex_star(g, v, edge_faces):
    # faces around v, ordered by walking across shared edges
    incident = [fi for fi, f in enumerate(g.faces) if v in f]
    if not incident:
        raise GraphError(f"vertex {v} lies on no face")

    def edges_at(fi):
        f = g.faces[fi]
        i = f.index(v)
        a, b = f[i - 1], f[(i + 1) % len(f)]
        return a, b

    order = [incident[0]]
    prev_nb = edges_at(incident[0])[0]
    cur = incident[0]
    while True:
        a, b = edges_at(cur)
        nxt_nb = b if a == prev_nb else a
        e = (v, nxt_nb) if v < nxt_nb else (nxt_nb, v)
        f1, f2 = edge_faces[e]
        nxt = f2 if f1 == cur else f1
        if nxt == order[0]:
            break
        order.append(nxt)
        prev_nb = nxt_nb
        cur = nxt
        if len(order) > len(incident):
            raise GraphError(f"vertex {v} star is not a single disk")
    if len(order) != len(incident):
        raise GraphError(f"vertex {v} star is not a single disk")
    return tuple(order)


# ---------------------------------------------------------------- file format


def parse_poly(text: str) -> PolyhedralGraph:
    """Parse the ``.poly`` text format (``poly``/``edge``/``face``/``coord`` lines)."""
    name, n = "", None
    edges, faces, coords = [], [], {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "poly":
                name, n = tok[1], int(tok[2])
            elif tok[0] == "edge":
                edges.append((int(tok[1]), int(tok[2])))
            elif tok[0] == "face":
                faces.append(tuple(int(t) for t in tok[1:]))
            elif tok[0] == "coord":
                coords[int(tok[1])] = tuple(tok[2:])
            else:
                raise GraphError(f"unknown record {tok[0]!r}")
        except (IndexError, ValueError) as exc:
            raise GraphError(f"line {lineno}: {exc}") from exc
    if n is None:
        raise GraphError("missing 'poly <id> <n>' header")
    g = PolyhedralGraph(n, edges, faces=faces or None, coords=coords or None, name=name)
    if g.n and (bfs_distances(g.adj, 0) < 0).any():
        raise GraphError(f"{name}: graph is disconnected")
    return g


def format_poly(g: PolyhedralGraph, comment: str = "") -> str:
    out = []
    if comment:
        out += [f"# {line}" for line in comment.splitlines()]
    out.append(f"poly {g.name or 'anon'} {g.n}")
    out += [f"edge {u} {v}" for u, v in g.edges]
    for f in g.faces or []:
        out.append("face " + " ".join(map(str, f)))
    for v, c in sorted((g.coords or {}).items()):
        out.append(f"coord {v} " + " ".join(map(str, c)))
    return "\n".join(out) + "\n"
