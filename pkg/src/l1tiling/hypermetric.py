"""5- and 7-gonal inequality scans with verifiable violation certificates.

For ``b`` in {+1,-1}^k with sum 1 the k-gonal inequality reads
``sum_{i<j} b_i b_j d(x_i, x_j) <= 0``. Every l1 metric satisfies it, so a
tuple with positive left-hand side (the *margin*) certifies that a graph
does not embed at any scale.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numba
import numpy as np

DEFAULT_RANDOM_ITERS = 10**7


@dataclass(frozen=True)
class ViolationCertificate:
    points: tuple[int, ...]
    signs: tuple[int, ...]
    margin: int
    graph_id: str = ""
    evaluations: int | None = field(default=None, compare=False)  # random mode only

    @property
    def k(self) -> int:
        return len(self.points)

    def to_dict(self) -> dict:
        rec = {"graph": self.graph_id, "k": self.k, "tuple": list(self.points),
               "signs": list(self.signs), "margin": self.margin}
        if self.evaluations is not None:
            rec["evaluations"] = self.evaluations
        return rec

    @classmethod
    def from_dict(cls, rec: dict) -> "ViolationCertificate":
        return cls(tuple(rec["tuple"]), tuple(rec["signs"]), int(rec["margin"]), rec.get("graph", ""))


@dataclass(frozen=True)
class Pass:
    k: int
    mode: str
    evaluations: int
    conclusive: bool
    seed: int | None = None
    notes: str = field(default="")

    def __bool__(self):
        return True


def bvector(k: int) -> tuple[int, ...]:
    if k not in (5, 7):
        raise ValueError(f"only 5- and 7-gonal inequalities are supported, got k={k}")
    h = (k + 1) // 2
    return (1,) * h + (-1,) * (k - h)


def margin(d: np.ndarray, points, signs) -> int:
    total = 0
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            total += signs[i] * signs[j] * int(d[points[i], points[j]])
    return total


def verify_certificate(d: np.ndarray, cert: ViolationCertificate) -> bool:
    """Recompute the margin from ``d``; true iff it is positive and matches."""
    n = d.shape[0]
    if any(not 0 <= p < n for p in cert.points):
        raise IndexError(f"certificate tuple {cert.points} out of range for n={n}")
    if len(cert.points) != len(cert.signs) or sum(cert.signs) != 1:
        return False
    if any(s not in (1, -1) for s in cert.signs) or len(cert.points) not in (5, 7):
        return False
    m = margin(d, cert.points, cert.signs)
    return m > 0 and m == cert.margin


# ---------------------------------------------------------------- exhaustive


@numba.njit(cache=True)
def _scan5(d, first_only):
    # negatives x<y, positives a<b<c; all distinct
    n = d.shape[0]
    out = np.full(6, -1, dtype=np.int64)
    f = np.empty(n, dtype=np.int64)
    for x in range(n):
        if first_only >= 0 and x != first_only:
            continue
        for y in range(n):
            if y == x or (first_only < 0 and y < x):
                continue
            dxy = d[x, y]
            for v in range(n):
                f[v] = d[x, v] + d[y, v]
            for a in range(n):
                if a == x or a == y:
                    continue
                fa = f[a]
                for b in range(a + 1, n):
                    if b == x or b == y:
                        continue
                    base = dxy + d[a, b] - fa - f[b]
                    for c in range(b + 1, n):
                        if c == x or c == y:
                            continue
                        m = base + d[a, c] + d[b, c] - f[c]
                        if m > 0:
                            out[0] = a
                            out[1] = b
                            out[2] = c
                            out[3] = x
                            out[4] = y
                            out[5] = m
                            return out
    return out


@numba.njit(cache=True)
def _scan5_first(d, v0):
    # tuples containing v0 as a positive point; the negative case is _scan5(d, v0)
    n = d.shape[0]
    out = np.full(6, -1, dtype=np.int64)
    f = np.empty(n, dtype=np.int64)
    for x in range(n):
        if x == v0:
            continue
        for y in range(x + 1, n):
            if y == v0:
                continue
            dxy = d[x, y]
            for v in range(n):
                f[v] = d[x, v] + d[y, v]
            for b in range(n):
                if b == x or b == y or b == v0:
                    continue
                base = dxy + d[v0, b] - f[v0] - f[b]
                for c in range(b + 1, n):
                    if c == x or c == y or c == v0:
                        continue
                    m = base + d[v0, c] + d[b, c] - f[c]
                    if m > 0:
                        out[0] = v0
                        out[1] = b
                        out[2] = c
                        out[3] = x
                        out[4] = y
                        out[5] = m
                        return out
    return out


@numba.njit(cache=True)
def _scan7(d, v0):
    # negatives x<y<z, positives p<q<r<s; v0 >= 0 forces v0 into the tuple
    n = d.shape[0]
    out = np.full(8, -1, dtype=np.int64)
    f = np.empty(n, dtype=np.int64)
    for x in range(n):
        for y in range(x + 1, n):
            for z in range(y + 1, n):
                neg_in = v0 < 0 or x == v0 or y == v0 or z == v0
                dneg = d[x, y] + d[x, z] + d[y, z]
                for v in range(n):
                    f[v] = d[x, v] + d[y, v] + d[z, v]
                for p in range(n):
                    if p == x or p == y or p == z:
                        continue
                    for q in range(p + 1, n):
                        if q == x or q == y or q == z:
                            continue
                        b1 = dneg + d[p, q] - f[p] - f[q]
                        for r in range(q + 1, n):
                            if r == x or r == y or r == z:
                                continue
                            b2 = b1 + d[p, r] + d[q, r] - f[r]
                            for s in range(r + 1, n):
                                if s == x or s == y or s == z:
                                    continue
                                if not neg_in and p != v0 and q != v0 and r != v0 and s != v0:
                                    continue
                                m = b2 + d[p, s] + d[q, s] + d[r, s] - f[s]
                                if m > 0:
                                    out[0] = p
                                    out[1] = q
                                    out[2] = r
                                    out[3] = s
                                    out[4] = x
                                    out[5] = y
                                    out[6] = z
                                    out[7] = m
                                    return out
    return out


# ---------------------------------------------------------------- randomized


@numba.njit(cache=True)
def _random_search(d, k, seed, iters, climb):
    """Random restarts with greedy single-point ascent on the margin.

    Every margin evaluation counts against ``iters``. Returns the tuple
    (positives first), the margin and the number of evaluations used.
    """
    np.random.seed(seed)
    n = d.shape[0]
    h = (k + 1) // 2
    sgn = np.empty(k, dtype=np.int64)
    for i in range(k):
        sgn[i] = 1 if i < h else -1
    pts = np.empty(k, dtype=np.int64)
    out = np.full(k + 2, -1, dtype=np.int64)
    used = 0
    while used < iters:
        # distinct random tuple
        cnt = 0
        while cnt < k:
            v = np.random.randint(n)
            ok = True
            for j in range(cnt):
                if pts[j] == v:
                    ok = False
            if ok:
                pts[cnt] = v
                cnt += 1
        m = 0
        for i in range(k):
            for j in range(i + 1, k):
                m += sgn[i] * sgn[j] * d[pts[i], pts[j]]
        used += 1
        stalled = 0
        while m <= 0 and used < iters and stalled < climb:
            i = np.random.randint(k)
            v = np.random.randint(n)
            clash = False
            for j in range(k):
                if pts[j] == v:
                    clash = True
            if clash:
                stalled += 1
                continue
            delta = 0
            for j in range(k):
                if j != i:
                    delta += sgn[i] * sgn[j] * (d[v, pts[j]] - d[pts[i], pts[j]])
            used += 1
            if delta >= 0:
                if delta > 0:
                    stalled = 0
                else:
                    stalled += 1
                pts[i] = v
                m += delta
            else:
                stalled += 1
        if m > 0:
            for i in range(k):
                out[i] = pts[i]
            out[k] = m
            out[k + 1] = used
            return out
    out[k + 1] = used
    return out


def _canonical(points, signs):
    pos = sorted(p for p, s in zip(points, signs) if s > 0)
    neg = sorted(p for p, s in zip(points, signs) if s < 0)
    return tuple(pos + neg), (1,) * len(pos) + (-1,) * len(neg)


def kgonal_check(d: np.ndarray, k: int = 5, mode: str = "exhaustive", seed: int | None = None,
                 iters: int = DEFAULT_RANDOM_ITERS, fixed_vertex: int | None = None,
                 climb: int = 200, graph_id: str = ""):
    """Search for a violated k-gonal inequality in the metric ``d``.

    ``mode`` is ``"exhaustive"`` (all k-subsets and sign placements),
    ``"fixed"`` (exhaustive over tuples containing ``fixed_vertex``; only
    meaningful for violation search on vertex-homogeneous graphs) or
    ``"random"`` (seeded restarts plus local ascent, ``iters`` evaluations).
    Returns a :class:`ViolationCertificate` or a :class:`Pass`.
    """
    bvector(k)
    d = np.ascontiguousarray(d, dtype=np.int64)
    n = d.shape[0]
    if n < k:
        return Pass(k, mode, 0, True, notes="vacuous: fewer than k points")
    if mode == "exhaustive":
        res = _scan5(d, -1) if k == 5 else _scan7(d, -1)
    elif mode == "fixed":
        v0 = 0 if fixed_vertex is None else fixed_vertex
        if k == 5:
            res = _scan5(d, v0)
            if res[-1] <= 0:
                res = _scan5_first(d, v0)
        else:
            res = _scan7(d, v0)
    elif mode == "random":
        if seed is None:
            raise ValueError("random mode needs an explicit seed")
        res = _random_search(d, k, int(seed), int(iters), int(climb))
        if res[k] <= 0:
            return Pass(k, mode, int(res[k + 1]), False, seed=seed,
                        notes="no violation found (inconclusive)")
        pts, sg = _canonical(res[:k].tolist(), bvector(k))
        return ViolationCertificate(pts, sg, int(res[k]), graph_id, evaluations=int(res[k + 1]))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if res[k] <= 0:
        return Pass(k, mode, 0, mode == "exhaustive")
    pts, sg = _canonical(res[:k].tolist(), bvector(k))
    return ViolationCertificate(pts, sg, int(res[k]), graph_id)
