"""l1-embeddings of graph metrics at scale 1 and 2.

A scale-``lam`` embedding of a metric ``d`` is a multiset of cuts whose cut
semimetrics sum to ``lam * d``. Scale 1 cuts are the Djokovic-Winkler
halves ``W(x, y)``. For scale 2 every unit pair ``xy`` is crossed by exactly
two cuts, both of the form ``W(x, y) | E_i`` where ``E_1, E_2`` split the
vertices equidistant from ``x`` and ``y``; both sides of every cut are
metrically convex. The scale-2 search grows cuts one unit pair at a time
under these rules and backtracks. Whatever the search returns is checked by
:func:`verify_embedding` before it leaves this module.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .graphcore import PolyhedralGraph, all_pairs_distances, is_bipartite
from .hypermetric import Pass, ViolationCertificate, kgonal_check, verify_certificate

TARGETS = ("H", "halfH", "Z", "halfZ")


@dataclass
class Embedding:
    scale: int
    target: str
    dim: int
    coords: np.ndarray
    rigid: bool | None = None
    cuts: list[int] | None = field(default=None, repr=False)

    def label(self) -> str:
        """Human form such as ``H_6`` or ``1/2 Z_4``; unbounded dims print ``inf``."""
        base = "Z" if self.target in ("Z", "halfZ") else "H"
        half = "1/2 " if self.target.startswith("half") else ""
        dim = "inf" if self.dim < 0 else str(self.dim)
        return f"{half}{base}_{dim}"

    def to_dict(self, graph_id: str = "") -> dict:
        return {"graph": graph_id, "scale": self.scale, "target": self.target,
                "dim": self.dim, "coords": self.coords.tolist()}


@dataclass
class Fail:
    reason: str
    witness: object = None

    def __bool__(self):
        return False


@dataclass
class EmbedReport:
    status: str  # "embeds" | "not_embeddable" | "inconclusive"
    embedding: Embedding | None = None
    certificate: ViolationCertificate | None = None
    reason: str = ""
    core_radius: int | None = None
    orbit_count: int | None = None
    hypermetric: list = field(default_factory=list)
    family_count: int | None = None
    certificate_keys: list | None = None
    unbounded: bool = False
    orbit_growth: list = field(default_factory=list)

    def summary(self) -> str:
        if self.status == "embeds":
            if self.unbounded:
                return ("1/2 " if self.embedding.scale == 2 else "") + "Z_inf"
            return self.embedding.label()
        if self.status == "not_embeddable":
            return f"non {self.certificate.k}-gonal"
        return f"inconclusive ({self.reason})"


class MetricSpace:
    """Integer metric with precomputed interval bitsets and unit-pair data."""

    def __init__(self, d: np.ndarray):
        self.d = np.ascontiguousarray(d, dtype=np.int64)
        n = self.n = self.d.shape[0]
        self.full = (1 << n) - 1
        iu, ju = np.nonzero(np.triu(self.d == 1))
        self.edges = list(zip(iu.tolist(), ju.tolist()))
        self._intervals = None
        self._wsets = None

    @property
    def intervals(self) -> list[list[int]]:
        if self._intervals is None:
            d = self.d
            rows = []
            for p in range(self.n):
                m = (d[p][None, :] + d) == d[p][:, None]  # m[q, w]: w on a p-q geodesic
                rows.append([_bits(r) for r in m])
            self._intervals = rows
        return self._intervals

    def wsets(self):
        """Per unit pair ``(x, y)``: bitsets (closer to x, closer to y, equidistant)."""
        if self._wsets is None:
            out = []
            for x, y in self.edges:
                diff = self.d[x] - self.d[y]
                out.append((_bits(diff < 0), _bits(diff > 0), _bits(diff == 0)))
            self._wsets = out
        return self._wsets

    def closure(self, s: int) -> int:
        """Smallest metrically convex superset of the bitset ``s``."""
        iv = self.intervals
        done: list[int] = []
        todo = _members(s)
        while todo:
            p = todo.pop()
            row = iv[p]
            add = 0
            for q in done:
                add |= row[q]
            done.append(p)
            new = add & ~s
            if new:
                s |= new
                todo.extend(_members(new))
        return s

    def is_convex(self, s: int) -> bool:
        return self.closure(s) == s


def _bits(mask) -> int:
    idx = np.flatnonzero(mask)
    v = 0
    for i in idx.tolist():
        v |= 1 << i
    return v


def _members(s: int) -> list[int]:
    out = []
    while s:
        low = s & -s
        out.append(low.bit_length() - 1)
        s ^= low
    return out


def cut_matrix(cuts: list[int], n: int) -> np.ndarray:
    """Sum of cut semimetrics as an n x n integer matrix."""
    if not cuts:
        return np.zeros((n, n), dtype=np.int64)
    m = np.array([[(c >> v) & 1 for v in range(n)] for c in cuts], dtype=np.int64)
    return np.abs(m[:, :, None] - m[:, None, :]).sum(axis=0)


def coords_from_cuts(cuts: list[int], n: int, base: int = 0) -> np.ndarray:
    cols = []
    for c in cuts:
        if (c >> base) & 1:
            c = ((1 << n) - 1) & ~c
        cols.append([(c >> v) & 1 for v in range(n)])
    if not cols:
        return np.zeros((n, 0), dtype=np.int64)
    return np.array(cols, dtype=np.int64).T


def canonical_cuts(cuts: list[int], n: int) -> tuple[int, ...]:
    full = (1 << n) - 1
    return tuple(sorted(min(c, full & ~c) for c in cuts))


# ---------------------------------------------------------------- verification


def verify_embedding(d_or_g, e: Embedding) -> bool:
    """Exact all-pairs check of ``scale * d(u, v) == |x_u - x_v|_1``."""
    d = d_or_g if isinstance(d_or_g, np.ndarray) else all_pairs_distances(d_or_g)
    x = np.asarray(e.coords, dtype=np.int64)
    if x.shape[0] != d.shape[0]:
        raise ValueError(f"embedding has {x.shape[0]} rows for {d.shape[0]} vertices")
    if e.scale not in (1, 2) or e.target not in TARGETS:
        return False
    if e.target in ("H", "halfH") and not np.isin(x, (0, 1)).all():
        return False
    if e.target in ("H", "Z") and e.scale != 1 or e.target in ("halfH", "halfZ") and e.scale != 2:
        return False
    if x.shape[1] and (x == x[:1]).all(axis=0).any():
        return False
    if e.dim >= 0 and e.target in ("H", "halfH") and x.shape[1] != e.dim:
        return False
    l1 = np.abs(x[:, None, :] - x[None, :, :]).sum(axis=2)
    return bool((l1 == e.scale * d).all())


# ---------------------------------------------------------------- scale 1


def theta_classes(g_or_space) -> list[list[tuple[int, int]]]:
    """Transitive closure of the Djokovic-Winkler relation on edges."""
    space = g_or_space if isinstance(g_or_space, MetricSpace) else _space(g_or_space)
    if isinstance(g_or_space, PolyhedralGraph):
        ok, cyc = is_bipartite(g_or_space)
        if not ok:
            raise ValueError(f"theta_classes needs a bipartite graph; odd cycle {cyc}")
    d = space.d
    edges = space.edges
    m = len(edges)
    parent = list(range(m))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    ex = np.array([e[0] for e in edges])
    ey = np.array([e[1] for e in edges])
    for i, (x, y) in enumerate(edges):
        rel = (d[x, ex] + d[y, ey]) != (d[x, ey] + d[y, ex])
        for j in np.flatnonzero(rel).tolist():
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    classes: dict[int, list] = {}
    for i in range(m):
        classes.setdefault(find(i), []).append(edges[i])
    return [classes[k] for k in sorted(classes)]


def _space(g) -> MetricSpace:
    if isinstance(g, MetricSpace):
        return g
    if isinstance(g, np.ndarray):
        return MetricSpace(g)
    return MetricSpace(all_pairs_distances(g))


def scale1_embed(g) -> Embedding | Fail:
    """Partial-cube recognition: one cut per Theta class, verified."""
    space = _space(g)
    wsets = space.wsets()
    index = {e: i for i, e in enumerate(space.edges)}
    for (x, y), (_, _, eq) in zip(space.edges, wsets):
        if eq:
            return Fail("not bipartite", (x, y))
    cuts = []
    for cls in theta_classes(space):
        a, _, _ = wsets[index[cls[0]]]
        crossed = [e for e in space.edges if ((a >> e[0]) ^ (a >> e[1])) & 1]
        if sorted(crossed) != sorted(cls):
            return Fail("Theta class cut is not convex", cls[0])
        cuts.append(a)
    emb = Embedding(1, "H", len(cuts), coords_from_cuts(cuts, space.n), cuts=cuts)
    if not verify_embedding(space.d, emb):
        return Fail("Theta cuts do not sum to the metric", None)
    return emb


# ---------------------------------------------------------------- scale 2


class SearchBudget(Exception):
    pass


class _Scale2Search:
    def __init__(self, space: MetricSpace, node_budget: int):
        self.s = space
        self.n = space.n
        self.full = space.full
        self.wsets = space.wsets()
        self.edges = space.edges
        self.m = len(self.edges)
        self.eu = np.array([e[0] for e in self.edges], dtype=np.int64)
        self.ev = np.array([e[1] for e in self.edges], dtype=np.int64)
        self.target = 2 * space.d
        self.budget = node_budget
        self.nodes = 0
        self.exhausted = False

    def crossing(self, c: int) -> np.ndarray:
        mem = np.array([(c >> v) & 1 for v in range(self.n)], dtype=np.int8)
        return mem, np.flatnonzero(mem[self.eu] != mem[self.ev])

    def solutions(self):
        state = _State(np.zeros(self.m, dtype=np.int64), [], [None] * self.m,
                       np.zeros((self.n, self.n), dtype=np.int64))
        yield from self._rec(state)

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            self.exhausted = True
            raise SearchBudget

    def _add(self, st: "_State", c: int) -> "_State | None":
        mem, crossed = self.crossing(c)
        if (st.count[crossed] >= 2).any():
            return None
        dm = np.abs(mem[:, None].astype(np.int64) - mem[None, :])
        total = st.total + dm
        if (total > self.target).any():
            return None
        count = st.count.copy()
        count[crossed] += 1
        first = list(st.first)
        for e in crossed.tolist():
            if first[e] is None:
                first[e] = c
        return _State(count, st.cuts + [c], first, total)

    def _propagate(self, st):
        while True:
            ones = np.flatnonzero(st.count == 1)
            if not len(ones):
                return st
            e = int(ones[0])
            x, _ = self.edges[e]
            a, _, eq = self.wsets[e]
            c = st.first[e]
            if not (c >> x) & 1:
                c = self.full & ~c
            partner = a | (eq & ~c)
            if not (self.s.is_convex(partner) and self.s.is_convex(self.full & ~partner)):
                return None
            st = self._add(st, partner)
            if st is None:
                return None

    def _rec(self, st):
        self._tick()
        st = self._propagate(st)
        if st is None:
            return
        zeros = np.flatnonzero(st.count == 0)
        if not len(zeros):
            if (st.total == self.target).all():
                yield list(st.cuts)
            return
        e = int(zeros[0])
        for c in self._convex_cuts(e, st):
            nxt = self._add(st, c)
            if nxt is not None:
                yield from self._rec(nxt)

    def _convex_cuts(self, e, st):
        """All bipartitions with both sides convex that separate edge ``e``."""
        x, y = self.edges[e]
        a, b, _ = self.wsets[e]
        sat = st.count >= 2
        blocked_u, blocked_v = self.eu[sat], self.ev[sat]
        inside = self.s.closure(a | (1 << x))
        outside = self.s.closure(b | (1 << y))
        stack = [(inside, outside)]
        while stack:
            self._tick()
            ins, outs = stack.pop()
            if ins & outs:
                continue
            # a saturated edge may not be separated
            if blocked_u.size:
                iu = np.array([(ins >> int(u)) & 1 for u in blocked_u])
                iv = np.array([(outs >> int(v)) & 1 for v in blocked_v])
                ou = np.array([(outs >> int(u)) & 1 for u in blocked_u])
                ov = np.array([(ins >> int(v)) & 1 for v in blocked_v])
                if ((iu & iv) | (ou & ov)).any():
                    continue
            free = self.full & ~(ins | outs)
            if not free:
                yield ins
                continue
            w = (free & -free).bit_length() - 1
            # push "out" first so that "in" is explored first
            stack.append((ins, self.s.closure(outs | (1 << w))))
            stack.append((self.s.closure(ins | (1 << w)), outs))


@dataclass
class _State:
    count: np.ndarray
    cuts: list
    first: list
    total: np.ndarray


def _scale2_solutions(space: MetricSpace, node_budget: int):
    search = _Scale2Search(space, node_budget)
    return search, search.solutions()


def scale2_embed(g, node_budget: int = 200_000) -> Embedding | Fail:
    """Half-cube embedding search (scale 2).

    Returns a verified :class:`Embedding` into ``1/2 H_m`` or a :class:`Fail`
    whose reason says whether the search space was exhausted.
    """
    space = _space(g)
    search, gen = _scale2_solutions(space, node_budget)
    try:
        for cuts in gen:
            emb = Embedding(2, "halfH", len(cuts), coords_from_cuts(cuts, space.n), cuts=cuts)
            if verify_embedding(space.d, emb):
                return emb
    except SearchBudget:
        return Fail("search budget exhausted", search.nodes)
    return Fail("no cut decomposition exists", search.nodes)


def all_scale2_embeddings(g, node_budget: int = 200_000, limit: int = 64):
    """Pairwise non-equivalent scale-2 embeddings; ``complete`` tells whether the search finished."""
    space = _space(g)
    search, gen = _scale2_solutions(space, node_budget)
    seen = {}
    complete = True
    try:
        for cuts in gen:
            key = canonical_cuts(cuts, space.n)
            if key not in seen:
                seen[key] = Embedding(2, "halfH", len(cuts), coords_from_cuts(cuts, space.n), cuts=cuts)
                if len(seen) >= limit:
                    complete = False
                    break
    except SearchBudget:
        complete = False
    return list(seen.values()), complete


def equivalent(e1: Embedding, e2: Embedding, n: int) -> bool:
    """Equal up to coordinate permutation, complementation and translation."""
    if e1.cuts is not None and e2.cuts is not None:
        return e1.scale == e2.scale and canonical_cuts(e1.cuts, n) == canonical_cuts(e2.cuts, n)
    x1 = np.asarray(e1.coords) - np.asarray(e1.coords)[0]
    x2 = np.asarray(e2.coords) - np.asarray(e2.coords)[0]
    k1 = sorted(tuple(abs(c)) for c in x1.T.tolist())
    k2 = sorted(tuple(abs(c)) for c in x2.T.tolist())
    return k1 == k2


def rigidity_check(g, e: Embedding, node_budget: int = 200_000):
    """``True`` / ``(False, other_embedding)`` / ``None`` when the budget runs out."""
    space = _space(g)
    if e.scale == 1:
        # a scale-1 decomposition doubles into a scale-2 one; compare there
        e = Embedding(2, "halfH", 2 * len(e.cuts), np.hstack([e.coords, e.coords]), cuts=e.cuts + e.cuts)
    found, complete = all_scale2_embeddings(space, node_budget)
    for other in found:
        if not equivalent(other, e, space.n):
            return False, other
    return True if complete else None


# ---------------------------------------------------------------- pipeline


def hypermetric_scan(d: np.ndarray, seed: int = 1, iters: int = 10**6, exhaustive_cap: int = 120,
                     graph_id: str = "", k_list=(5, 7)):
    """Violation search used by :func:`l1_embed`: fixed-vertex, random, then exhaustive."""
    n = d.shape[0]
    log = []
    for k in k_list:
        res = kgonal_check(d, k, mode="fixed", fixed_vertex=0, graph_id=graph_id)
        log.append((k, "fixed", isinstance(res, ViolationCertificate)))
        if isinstance(res, ViolationCertificate):
            return res, log
        res = kgonal_check(d, k, mode="random", seed=seed, iters=iters, graph_id=graph_id)
        log.append((k, "random", isinstance(res, ViolationCertificate)))
        if isinstance(res, ViolationCertificate):
            return res, log
        cap = exhaustive_cap if k == 5 else 40
        if n <= cap:
            res = kgonal_check(d, k, mode="exhaustive", graph_id=graph_id)
            log.append((k, "exhaustive", isinstance(res, ViolationCertificate)))
            if isinstance(res, ViolationCertificate):
                return res, log
    return None, log


def l1_embed(g, node_budget: int = 200_000, seed: int = 1, iters: int = 10**6,
             graph_id: str = "") -> EmbedReport:
    """Minimal-scale pipeline: scale 1, scale 2, then a k-gonal certificate."""
    space = _space(g)
    if space.n <= 1:
        return EmbedReport("embeds", Embedding(1, "H", 0, np.zeros((space.n, 0), dtype=np.int64), cuts=[]))
    reasons = []
    e1 = scale1_embed(space)
    if isinstance(e1, Embedding):
        return EmbedReport("embeds", e1)
    reasons.append(f"scale 1: {e1.reason}")
    e2 = scale2_embed(space, node_budget=node_budget)
    if isinstance(e2, Embedding):
        return EmbedReport("embeds", e2)
    reasons.append(f"scale 2: {e2.reason}")
    cert, log = hypermetric_scan(space.d, seed=seed, iters=iters, graph_id=graph_id)
    if cert is not None:
        assert verify_certificate(space.d, cert)
        return EmbedReport("not_embeddable", certificate=cert, reason="; ".join(reasons), hypermetric=log)
    return EmbedReport("inconclusive", reason="; ".join(reasons), hypermetric=log)


# ---------------------------------------------------------------- periodic


def cut_orbits(cuts: list[int], keys: list, pairs, split=None) -> tuple[list[int], list[int]]:
    """Group core cuts into translation orbits.

    ``keys[v]`` names core vertex ``v``; ``split`` maps a key to ``(type,
    lattice vector)`` (default: the key is already such a pair); ``pairs``
    are the unit pairs of the core. Two cuts share an orbit when a lattice
    translation carries the oriented unit pairs crossing one onto those
    crossing the other wherever both ends stay in the core. Returns ``(orbit
    id per cut, side flip per cut)``: flipping makes translates agree on
    which side is positive.
    """
    ctx = _CutContext(cuts, keys, pairs, split)
    shapes = ctx.shapes
    reps: list[int] = []
    orbit, flip = [], []
    for i, s1 in enumerate(shapes):
        for o, j in enumerate(reps):
            s2 = shapes[j]
            if ctx.translate(s1, s2) is not None:
                orbit.append(o)
                flip.append(flip[j])
                break
            if ctx.translate(s1, _reverse(s2)) is not None:
                orbit.append(o)
                flip.append(1 - flip[j])
                break
        else:
            orbit.append(len(reps))
            flip.append(0)
            reps.append(i)
    return orbit, flip


class _CutContext:
    def __init__(self, cuts, keys, pairs, split):
        split = split or (lambda k: k)
        lk = [split(k) for k in keys]
        self.where = {(t, tuple(v)) for t, v in lk}
        typ = [t for t, _ in lk]
        vec = [np.asarray(v, dtype=np.int64) for _, v in lk]
        self.dim = len(vec[0]) if vec else 0
        self.shapes = [_crossing_shapes(c, pairs, typ, vec) for c in cuts]

    def match_at(self, s1, s2, t, thr=None):
        """``s1 + t`` agrees with ``s2`` wherever both ends lie in the core."""
        where = self.where
        if thr is None:
            thr = max(1, min(len(s1), len(s2)) // 2)
        hits = 0
        for (sa, sb, sd), wa in s1:
            xa = tuple(a + b for a, b in zip(wa, t))
            xb = tuple(a + b for a, b in zip(xa, sd))
            if (sa, xa) in where and (sb, xb) in where:
                if ((sa, sb, sd), xa) not in s2:
                    return False
                hits += 1
        if hits < thr:
            return False
        for (sa, sb, sd), wa in s2:
            xa = tuple(a - b for a, b in zip(wa, t))
            xb = tuple(a + b for a, b in zip(xa, sd))
            if (sa, xa) in where and (sb, xb) in where and ((sa, sb, sd), xa) not in s1:
                return False
        return True

    def translate(self, s1, s2):
        """A translation carrying ``s1`` onto ``s2``, or None."""
        if len(s1) <= len(s2):
            shape0, anchor = min(s1)
            cands = (tuple(b - a for a, b in zip(anchor, vb)) for shape, vb in s2 if shape == shape0)
        else:
            shape0, anchor = min(s2)
            cands = (tuple(a - b for a, b in zip(anchor, va)) for shape, va in s1 if shape == shape0)
        for t in cands:
            if self.match_at(s1, s2, t):
                return t
        return None

    def normal(self, s):
        """Primitive normal of the translations fixing a cut, or None if undetermined."""
        # translations fixing a cut carry crossing pairs of one shape onto each
        # other, so candidates are differences of such pairs
        by_shape: dict = {}
        for shape, va in s:
            by_shape.setdefault(shape, []).append(va)
        cand = set()
        for vs in by_shape.values():
            for a in vs:
                for b in vs:
                    t = tuple(x - y for x, y in zip(a, b))
                    if any(t) and t[np.flatnonzero(t)[0]] > 0:
                        cand.add(t)
        stab = [t for t in sorted(cand) if self.match_at(s, s, t, thr=1)]
        if not stab:
            return None
        m = np.array(stab, dtype=np.int64)
        if np.linalg.matrix_rank(m) != self.dim - 1:
            return None
        if self.dim == 2:
            v = m[0]
            nrm = np.array([-v[1], v[0]])
        else:
            a = m[0]
            b = next(x for x in m[1:] if np.linalg.matrix_rank(np.array([a, x])) == 2)
            nrm = np.cross(a, b)
        g = np.gcd.reduce(np.abs(nrm))
        nrm = nrm // g
        if nrm[np.flatnonzero(nrm)[0]] < 0:
            nrm = -nrm
        return tuple(nrm.tolist())


def _crossing_shapes(c, pairs, typ, vec):
    out = set()
    for u, v in pairs:
        bu, bv = (c >> u) & 1, (c >> v) & 1
        if bu == bv:
            continue
        a, b = (u, v) if bu else (v, u)
        out.add(((typ[a], typ[b], tuple((vec[b] - vec[a]).tolist())), tuple(vec[a].tolist())))
    return out


def _reverse(shapes):
    return {((tb, ta, tuple(-x for x in dl)), tuple(a + x for a, x in zip(va, dl)))
            for (ta, tb, dl), va in shapes}


def parallel_families(cuts, orbit, flip, keys, pairs, split=None):
    """Merge translation orbits that describe one lattice direction.

    Orbits related only by a symmetry outside the quotient lattice (a screw,
    a glide, a sublattice coset) share the sublattice of translations fixing
    their cuts. Orbits merge when those stabilisers have the same normal and
    every pair of their cuts is nested after a common reorientation.
    Returns ``(family per cut, flip per cut)``.
    """
    n = len(keys)
    full = (1 << n) - 1
    ctx = _CutContext(cuts, keys, pairs, split)
    norb = max(orbit) + 1 if orbit else 0
    members = [[i for i, o in enumerate(orbit) if o == k] for k in range(norb)]
    oriented = [full & ~c if f else c for c, f in zip(cuts, flip)]
    if all(sum((c >> u & 1) != (c >> v & 1) for c in cuts) == 1 for u, v in pairs):
        return _edge_type_families(ctx, orbit, flip, members, norb)
    normals = []
    for k in range(norb):
        rep = max(members[k], key=lambda i: len(ctx.shapes[i]))
        normals.append(ctx.normal(ctx.shapes[rep]))

    def nested(a, b):
        return not (a & ~b) or not (b & ~a)

    fam_of, fam_flip = [0] * norb, [0] * norb
    fams: list[list[tuple[int, int]]] = []
    for k in range(norb):
        placed = False
        for fi, fam in enumerate(fams):
            if normals[k] is None or normals[fam[0][0]] != normals[k]:
                continue
            for rel in (0, 1):
                sk = [full & ~oriented[i] if rel else oriented[i] for i in members[k]]
                ok = all(nested(a, full & ~oriented[j] if rel2 else oriented[j])
                         for o2, rel2 in fam for j in members[o2] for a in sk)
                if ok:
                    fam.append((k, rel))
                    fam_of[k], fam_flip[k] = fi, rel
                    placed = True
                    break
            if placed:
                break
        if not placed:
            fam_of[k], fam_flip[k] = len(fams), 0
            fams.append([(k, 0)])
    return [fam_of[o] for o in orbit], [f ^ fam_flip[o] for o, f in zip(orbit, flip)]


def _edge_type_families(ctx, orbit, flip, members, norb):
    # scale 1: every edge orbit of the net is crossed by cuts of one direction
    # only, so orbits crossing a common edge type are one family
    parent = list(range(norb))
    rel = [0] * norb

    def find(k):
        if parent[k] == k:
            return k, 0
        root, r = find(parent[k])
        parent[k], rel[k] = root, rel[k] ^ r
        return root, rel[k]

    seen = {}
    for k in range(norb):
        for i in members[k]:
            f = flip[i]
            for shape, _ in ctx.shapes[i]:
                ta, tb, dl = shape
                rev = (tb, ta, tuple(-x for x in dl))
                key, r = (shape, f) if shape <= rev else (rev, 1 - f)
                if key not in seen:
                    seen[key] = (k, r)
                    continue
                k2, r2 = seen[key]
                a, ra = find(k)
                b, rb = find(k2)
                if a != b:
                    parent[a], rel[a] = b, ra ^ rb ^ r ^ r2
    roots, fam_of, fam_flip = {}, [0] * norb, [0] * norb
    for k in range(norb):
        root, r = find(k)
        fam_of[k] = roots.setdefault(root, len(roots))
        fam_flip[k] = r
    return [fam_of[o] for o in orbit], [f ^ fam_flip[o] for o, f in zip(orbit, flip)]


def lattice_coords(cuts, family, flip, n, base=0):
    """One integer coordinate per family: how many of its oriented cuts contain each vertex."""
    m = max(family) + 1 if family else 0
    x = np.zeros((n, m), dtype=np.int64)
    for c, o, f in zip(cuts, family, flip):
        side = np.array([(c >> v) & 1 for v in range(n)], dtype=np.int64)
        x[:, o] += side if not f else 1 - side
    return x - x[base]


def edge_type_coords(cuts, family, flip, keys, pairs, split=None):
    """Family coordinates propagated along edges, one increment per edge orbit.

    A core cut may be only a piece of a cut of the infinite net, so counting
    core cuts per family can fail even when the families are right. Instead
    each oriented edge orbit gets the family increment its core crossings
    show (all crossings of an orbit must agree) and coordinates are summed
    along a BFS tree from vertex 0. Returns None on disagreement.
    """
    split = split or (lambda k: k)
    lk = [split(k) for k in keys]
    n = len(keys)
    m = max(family) + 1 if family else 0
    full = (1 << n) - 1
    ori = [full & ~c if f else c for c, f in zip(cuts, flip)]
    step: dict = {}
    adj = [[] for _ in range(n)]
    for u, v in pairs:
        delta = np.zeros(m, dtype=np.int64)
        for c, fam in zip(ori, family):
            bu, bv = c >> u & 1, c >> v & 1
            if bu != bv:
                delta[fam] += bv - bu
        (tu, xu), (tv, xv) = lk[u], lk[v]
        key = (tu, tv, tuple(b - a for a, b in zip(xu, xv)))
        rev = (tv, tu, tuple(a - b for a, b in zip(xu, xv)))
        if key > rev:
            key, delta = rev, -delta
        old = step.setdefault(key, delta)
        if not np.array_equal(old, delta):
            return None
        adj[u].append(v)
        adj[v].append(u)
    x = np.zeros((n, m), dtype=np.int64)
    seen = [False] * n
    seen[0] = True
    queue = [0]
    for u in queue:
        for v in adj[u]:
            if not seen[v]:
                (tu, xu), (tv, xv) = lk[u], lk[v]
                key = (tu, tv, tuple(b - a for a, b in zip(xu, xv)))
                rev = (tv, tu, tuple(a - b for a, b in zip(xu, xv)))
                x[v] = x[u] + step[key] if key in step else x[u] - step[rev]
                seen[v] = True
                queue.append(v)
    if not all(seen):
        return None
    return x[:, np.any(x != 0, axis=0)] if n else x


def theta_lattice_coords(d, keys, split=None, merge_parallel=True):
    """Scale-1 lattice coordinates of an exact ball from the Theta relation.

    Edge orbits of the net are joined (with relative orientation) whenever
    two of their edges are Theta-related in ``d``; each class is one lattice
    direction. Coordinates are summed along a BFS tree from vertex 0.
    With ``merge_parallel`` classes whose halfspaces never cross inside the
    ball are one direction as well (several cut orbits per period).
    Returns the coordinate array or None when orientations conflict.
    """
    split = split or (lambda k: k)
    lk = [split(k) for k in keys]
    n = d.shape[0]
    us, vs = np.nonzero(np.triu(d == 1))
    if not len(us):
        return None
    kinds, sign = {}, []
    kid = []
    for u, v in zip(us, vs):
        (tu, xu), (tv, xv) = lk[u], lk[v]
        key = (tu, tv, tuple(b - a for a, b in zip(xu, xv)))
        rev = (tv, tu, tuple(a - b for a, b in zip(xu, xv)))
        sgn = 1
        if key > rev:
            key, sgn = rev, -1
        kid.append(kinds.setdefault(key, len(kinds)))
        sign.append(sgn)
    kid = np.array(kid)
    sign = np.array(sign)
    # s[e, f] = d(x,u) + d(y,v) - d(x,v) - d(y,u) for e = (x,y), f = (u,v)
    s = d[us][:, us] + d[vs][:, vs] - d[us][:, vs] - d[vs][:, us]
    parent = list(range(len(kinds)))
    rel = [0] * len(kinds)

    def find(k):
        if parent[k] == k:
            return k, 0
        root, r = find(parent[k])
        parent[k], rel[k] = root, rel[k] ^ r
        return root, rel[k]

    ei, fi = np.nonzero(s != 0)
    for a, b in zip(ei, fi):
        if a >= b:
            continue
        # same orientation of e and f (as stored) when s < 0
        want = (0 if s[a, b] < 0 else 1) ^ (sign[a] != sign[b])
        ra, pa = find(kid[a])
        rb, pb = find(kid[b])
        if ra == rb:
            if pa ^ pb != want:
                return None
            continue
        parent[ra], rel[ra] = rb, pa ^ pb ^ want
    roots: dict[int, int] = {}
    fam, fsign = [], []
    for k in range(len(kinds)):
        root, r = find(k)
        fam.append(roots.setdefault(root, len(roots)))
        fsign.append(-1 if r else 1)
    m = len(roots)
    if merge_parallel and m > 1:
        fam, fsign, m = _merge_parallel(d, us, vs, kid, sign, fam, fsign, m)
    adj = [[] for _ in range(n)]
    for e, (u, v) in enumerate(zip(us, vs)):
        step = sign[e] * fsign[kid[e]]
        adj[u].append((v, fam[kid[e]], step))
        adj[v].append((u, fam[kid[e]], -step))
    x = np.zeros((n, m), dtype=np.int64)
    seen = np.zeros(n, bool)
    seen[0] = True
    queue = [0]
    for u in queue:
        for v, f, st in adj[u]:
            if not seen[v]:
                x[v] = x[u]
                x[v, f] += st
                seen[v] = True
                queue.append(v)
    return x if seen.all() else None


def _merge_parallel(d, us, vs, kid, sign, fam, fsign, m):
    # positive side of every edge (closer to its head in the class orientation)
    step = np.array([sign[e] * fsign[kid[e]] for e in range(len(us))])
    head = np.where(step > 0, vs, us)
    tail = np.where(step > 0, us, vs)
    pos = (d[:, head] < d[:, tail]).T.astype(np.int64)  # edges x vertices
    efam = np.array([fam[k] for k in kid])
    rows = [pos[efam == f] for f in range(m)]
    parent = list(range(m))
    rel = [0] * m

    def find(k):
        if parent[k] == k:
            return k, 0
        root, r = find(parent[k])
        parent[k], rel[k] = root, rel[k] ^ r
        return root, rel[k]

    for a in range(m):
        for b in range(a + 1, m):
            A, B = rows[a], rows[b]
            q11 = A @ B.T
            q10 = A @ (1 - B).T
            q01 = (1 - A) @ B.T
            q00 = (1 - A) @ (1 - B).T
            if ((q11 > 0) & (q10 > 0) & (q01 > 0) & (q00 > 0)).any():
                continue
            # parallel: same orientation when positive sides nest
            same = (q10[0, 0] == 0) or (q01[0, 0] == 0)
            ra, pa = find(a)
            rb, pb = find(b)
            want = 0 if same else 1
            if ra == rb:
                if pa ^ pb != want:
                    return fam, fsign, m
                continue
            parent[ra], rel[ra] = rb, pa ^ pb ^ want
    roots: dict[int, int] = {}
    new_of, flip_of = [], []
    for f in range(m):
        root, r = find(f)
        new_of.append(roots.setdefault(root, len(roots)))
        flip_of.append(-1 if r else 1)
    return ([new_of[f] for f in fam], [s_ * flip_of[f] for s_, f in zip(fsign, fam)], len(roots))


def nested_chains(cuts, orbit, flip, n):
    """Split each orbit greedily into chains of nested oriented cuts.

    Chains always give valid coordinates; when translation families fail to
    regroup, the chain count is the dimension, and its growth with the core
    radius signals an unbounded one.
    """
    full = (1 << n) - 1
    ori = [full & ~c if f else c for c, f in zip(cuts, flip)]
    chains: dict[int, list[list[int]]] = {}
    label = [0] * len(cuts)
    for i in sorted(range(len(cuts)), key=lambda i: (bin(ori[i]).count("1"), i)):
        for ch in chains.setdefault(orbit[i], []):
            if not ori[ch[-1]] & ~ori[i]:
                ch.append(i)
                label[i] = ch[0]
                break
        else:
            chains[orbit[i]].append([i])
            label[i] = i
    ids = {h: k for k, h in enumerate(sorted(set(label)))}
    return [ids[h] for h in label], list(flip)


def _absorb_undetermined(d, cuts, orbit, family, flip, keys, pairs, split):
    """Move cuts of families whose stabiliser normal the core cannot fix
    into a family with a known normal, one cut at a time, keeping a move
    only when the coordinates still verify."""
    ctx = _CutContext(cuts, keys, pairs, split)
    n = d.shape[0]
    m = max(family) + 1 if family else 0

    def ok(fam, fl):
        x = lattice_coords(cuts, fam, fl, n)
        return verify_embedding(d, Embedding(2, "halfZ", x.shape[1], x))

    if not ok(family, flip):
        return family, flip
    known = set()
    for f in set(family):
        big = max((i for i in range(len(cuts)) if family[i] == f), key=lambda i: len(ctx.shapes[i]))
        if ctx.normal(ctx.shapes[big]) is not None:
            known.add(f)
    family, flip = list(family), list(flip)
    loose = [i for i in range(len(cuts)) if family[i] not in known]
    options = {}
    for i in loose:
        options[i] = [(g, rel) for g in sorted(known) for rel in (0, 1)
                      if ok(family[:i] + [g] + family[i + 1:], flip[:i] + [flip[i] ^ rel] + flip[i + 1:])]
    loose.sort(key=lambda i: (len(options[i]), i))
    budget = [4096]

    def place(k, fam, fl):
        if k == len(loose):
            return fam, fl
        i = loose[k]
        for g, rel in options[i]:
            budget[0] -= 1
            if budget[0] < 0:
                return None
            f2 = fam[:i] + [g] + fam[i + 1:]
            l2 = fl[:i] + [flip[i] ^ rel] + fl[i + 1:]
            if ok(f2, l2):
                res = place(k + 1, f2, l2)
                if res is not None:
                    return res
        return None

    if loose and all(options[i] for i in loose):
        res = place(0, family, flip)
        if res is not None:
            family, flip = res
    ids = {h: k for k, h in enumerate(sorted(set(family)))}
    return [ids[h] for h in family], flip


def _lattice_embedding(patch, d, e: Embedding):
    """Regroup a core embedding into Z^m coordinates.

    Returns ``(embedding or None, orbit count, dimension, method)`` where
    method names the grouping that verified.
    """
    space_edges = list(zip(*np.nonzero(np.triu(d == 1))))
    pairs = [(int(a), int(b)) for a, b in space_edges]
    keys = patch.keys[:d.shape[0]]
    orbit, flip = cut_orbits(e.cuts, keys, pairs, patch.split)
    family, flip2 = parallel_families(e.cuts, orbit, flip, keys, pairs, patch.split)
    norb = max(orbit) + 1 if orbit else 0
    target = "Z" if e.scale == 1 else "halfZ"
    if e.scale == 2:
        family, flip2 = _absorb_undetermined(d, e.cuts, orbit, family, flip2, keys, pairs, patch.split)
    x = edge_type_coords(e.cuts, family, flip2, keys, pairs, patch.split)
    if x is not None:
        lat = Embedding(e.scale, target, x.shape[1], x, cuts=e.cuts)
        if verify_embedding(d, lat):
            return lat, norb, x.shape[1], "families"
    tries = (("families", (family, flip2)), ("orbits", (orbit, flip)),
             ("chains", nested_chains(e.cuts, orbit, flip, d.shape[0])))
    for how, (fam, fl) in tries:
        x = lattice_coords(e.cuts, fam, fl, d.shape[0])
        lat = Embedding(e.scale, target, x.shape[1], x, cuts=e.cuts)
        if verify_embedding(d, lat):
            return lat, norb, x.shape[1], how
    return None, norb, None, None


def _theta_lattice(patch, radius):
    de = patch.metric(radius)
    for merge in (True, False):
        x = theta_lattice_coords(de, patch.keys[:de.shape[0]], patch.split, merge_parallel=merge)
        if x is not None:
            lat = Embedding(1, "Z", x.shape[1], x)
            if verify_embedding(de, lat):
                return lat
    return None


def _ball_dimension(patch, rho, scale, node_budget, seed, cert_iters, graph_id):
    """Lattice regrouping on the exact ball of radius ``rho``.

    Returns ``("ok", embedding, method)``, ``("cert", certificate)`` or None.
    """
    de = patch.metric(rho)
    e = None
    if scale == 1:
        lat = _theta_lattice(patch, rho)
        if lat is not None:
            return "ok", lat, "theta"
        # translates of a cut need not nest (one new direction per tube in
        # a tube-stacked net); regroup the ball's own cuts instead
        e = scale1_embed(MetricSpace(de))
    if not isinstance(e, Embedding):
        e = scale2_embed(MetricSpace(de), node_budget=node_budget)
    if not isinstance(e, Embedding):
        cert = _cheap_certificate(de, seed, cert_iters, graph_id)
        return ("cert", cert) if cert is not None else None
    lat, _, _, how = _lattice_embedding(patch, de, e)
    return ("ok", lat, how) if lat is not None else None


def _cheap_certificate(d, seed, iters, graph_id, fixed_cap=260):
    if d.shape[0] <= fixed_cap:
        res = kgonal_check(d, 5, mode="fixed", fixed_vertex=0, graph_id=graph_id)
        if isinstance(res, ViolationCertificate):
            return res
    if d.shape[0] >= 5:
        res = kgonal_check(d, 5, mode="random", seed=seed, iters=iters, graph_id=graph_id)
        if isinstance(res, ViolationCertificate):
            return res
    return None


def _embed_core(patch, node_budget, seed, iters, graph_id):
    d = patch.core_metric()
    space = MetricSpace(d)
    e1 = scale1_embed(space)
    if isinstance(e1, Embedding):
        return d, EmbedReport("embeds", e1)
    e2 = scale2_embed(space, node_budget=node_budget)
    if isinstance(e2, Embedding):
        return d, EmbedReport("embeds", e2)
    reason = f"scale 1: {e1.reason}; scale 2: {e2.reason}"
    cert, log = hypermetric_scan(d, seed=seed, iters=iters, graph_id=graph_id)
    if cert is not None:
        return d, EmbedReport("not_embeddable", certificate=cert, reason=reason, hypermetric=log)
    return d, EmbedReport("inconclusive", reason=reason, hypermetric=log)


def periodic_embed(source, r: int = 3, bases=None, node_budget: int = 200_000, seed: int = 1,
                   iters: int = 10**6, cert_iters: int = 200_000, graph_id: str = "",
                   growth: bool = True, theta_extra: int = 4, ball_extra: int = 2,
                   escalate: int = 1) -> EmbedReport:
    """ell_1 status of a periodic graph from finite balls.

    ``source`` is a :class:`~l1tiling.periodicnet.PeriodicNet` or a callable
    ``R -> Patch``. For each base vertex (default: every motif vertex when
    the motif has at most 16, else vertex 0) the ball of radius ``R = 3r`` is
    expanded. Distances on its ball of radius ``R // 2`` are exact, so a
    violated 5-gonal inequality there certifies non-embeddability of the
    infinite graph. Otherwise the core of radius ``r`` around the first base
    is embedded (its distances are exact with a margin). On success the
    dimension of the lattice target is read off exact balls of radius
    ``R // 2, R // 2 + 1, ...`` around the same base until it repeats (at
    most ``theta_extra`` extra steps at scale 1, ``ball_extra`` at scale 2):

    * scale 1: Theta classes of edge orbits, merged when parallel;
    * scale 2: the ball's embedding, cuts grouped into translation orbits
      and parallel families.

    Coordinates are verified on the ball. A count still rising at the cap,
    or chains of nested cuts growing where no translation-invariant grouping
    exists, flags unbounded dimension; that flag triggers a further
    certificate search up to ``escalate`` radii beyond ``R // 2``.
    """
    if r < 2:
        raise ValueError("periodic_embed needs r >= 2")
    from .periodicnet import PeriodicNet, expand_patch

    R = 3 * r
    if isinstance(source, PeriodicNet):
        if bases is None:
            bases = list(range(source.motif_size)) if source.motif_size <= 16 else [0]
        makers = [(b, (lambda R_, b=b: expand_patch(source, R_, base=b))) for b in bases]
    else:
        makers = [(0, source)]
    patches = []
    for b, make in makers:
        patch = make(R)
        patches.append(patch)
        de = patch.metric(R // 2)
        cert = _cheap_certificate(de, seed, cert_iters, graph_id)
        if cert is not None:
            rep = EmbedReport("not_embeddable", certificate=cert, core_radius=R // 2,
                              reason=f"violation in the exact ball of radius {R // 2} around base {b}")
            rep.certificate_keys = [patch.keys[i] for i in cert.points]
            return rep
    patch = patches[0]
    d, rep = _embed_core(patch, node_budget, seed, iters, graph_id)
    rep.core_radius = r
    if rep.status != "embeds":
        return rep
    lat, norb, nfam, how = _lattice_embedding(patch, d, rep.embedding)
    rep.orbit_count = norb
    rep.family_count = nfam
    if lat is not None:
        rep.embedding = lat
        rep.orbit_growth = [(r, nfam)]
    scale = rep.embedding.scale
    counts, best, settled = [], None, False
    steps = theta_extra if scale == 1 else ball_extra
    for k in range(steps + 1) if growth else ():
        rho = R // 2 + k
        bp = patch if k == 0 else makers[0][1](2 * rho)
        res = _ball_dimension(bp, rho, scale, node_budget, seed, cert_iters, graph_id)
        if res is None:
            break
        if res[0] == "cert":
            out = EmbedReport("not_embeddable", certificate=res[1], core_radius=rho,
                              reason=f"the core embeds but the exact ball of radius {rho} does not")
            out.certificate_keys = [bp.keys[i] for i in res[1].points]
            return out
        _, blat, bhow = res
        if bhow == "chains" and counts and counts[-1][2] != "chains":
            # a grouping that verified at a smaller radius outranks chains
            settled = True
            break
        counts.append((rho, blat.dim, bhow))
        best = blat
        if bhow == "chains":
            # no translation-invariant grouping: chain counts across two radii
            if len(counts) >= 2:
                rep.unbounded = counts[-1][1] > counts[-2][1]
                settled = True
                break
        elif len(counts) >= 2 and counts[-1][1] == counts[-2][1]:
            settled = True
            break
    if best is not None:
        rep.embedding = best
        rep.family_count = best.dim
        rep.orbit_growth = [(rho_, m_) for rho_, m_, _ in counts]
        rep.core_radius = counts[-1][0]
        if not settled and len(counts) >= 3:
            rep.unbounded = counts[-1][1] > counts[-2][1] > counts[-3][1]
        rep.reason = (f"lattice coordinates ({counts[-1][2]}) verified on the exact ball "
                      f"of radius {counts[-1][0]}")
    elif lat is None:
        rep.reason = "cut orbits do not regroup into lattice coordinates; reporting the cube embedding"
        return rep
    if rep.unbounded:
        # growing dimension is also what a non-embeddable net whose finite
        # cores still embed looks like; look for a violation further out
        for rho in range(R // 2 + 1, R // 2 + 1 + escalate):
            for b, make in makers:
                big = make(2 * rho)
                de = big.metric(rho)
                cert = _cheap_certificate(de, seed, cert_iters, graph_id)
                if cert is not None:
                    out = EmbedReport("not_embeddable", certificate=cert, core_radius=rho,
                                      reason=f"violation in the exact ball of radius {rho} around base {b} "
                                             f"(searched after the core dimension kept growing)")
                    out.certificate_keys = [big.keys[i] for i in cert.points]
                    return out
    return rep
