"""Shipped data, expected results and the reproduction harness behind the CLI.

Entries come from three places under the data directory:

* ``poly/*.poly``: polyhedra; each file gives ``T1.<name>`` and its dual
  ``T1.<name>*``;
* ``net/*.net``: periodic nets, id taken from the ``net`` header line;
* rows of ``expected/*.json`` that carry a ``recipe`` (polyhedron families,
  products, 4-polytopes, non-compact partitions, layer stackings, gaps).

Every expected row names the entry it checks and carries a citation string
for each expected field. :func:`reproduce` runs one table and returns a
report whose rows are in table order whatever the number of worker
processes.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import polygen
from .embedder import (Embedding, EmbedReport, all_scale2_embeddings, equivalent, l1_embed,
                       periodic_embed, verify_embedding)
from .graphcore import (GraphError, PolyhedralGraph, all_pairs_distances, cycle_graph, diameter,
                        dual_polyhedron, euler_characteristic, isomorphic, parse_poly, path_graph)
from .hypermetric import Pass, ViolationCertificate, kgonal_check, verify_certificate
from .periodicnet import (PeriodicNet, ball, expand_patch, grunbaum_net, kelvin_net, nets_isomorphic,
                          noncompact_patch, parse_net, vertex_homogeneous)

DATA_DIR = Path(__file__).resolve().parent / "data"
TABLES = ("T1", "T2", "T3", "T4", "P4", "G")
DEFAULT_RADIUS = {"T2": 4, "T3": 3, "T4": 3, "G": 2}
ALTERNATIVES_MAX_N = 12  # enumerate all scale-2 embeddings of graphs this small
FOURPOLY = {"cell600": polygen.cell600, "snub24cell": polygen.snub24cell,
            "grand_antiprism": polygen.grand_antiprism}


class CatalogError(Exception):
    """Unknown id or table, or data that cannot be used."""


@dataclass
class ExpectedRow:
    """Expected values of one table row; ``cite[f]`` locates ``fields[f]`` in its table."""

    id: str
    table: str
    fields: dict
    cite: dict
    label: str = ""

    def dual(self) -> dict:
        return {k[5:]: v for k, v in self.fields.items() if k.startswith("dual_")}

    def primal(self) -> dict:
        return {k: v for k, v in self.fields.items() if not k.startswith("dual_") and k != "isomorphic_to"}


@dataclass
class CatalogEntry:
    id: str
    kind: str  # polyhedron | net2 | net3 | fourpoly | generated | noncompact | gap
    source: str
    meta: dict = field(default_factory=dict)
    recipe: dict | None = None
    expected: ExpectedRow | None = None
    is_dual: bool = False
    errors: list = field(default_factory=list)


class Catalog(list):
    """List of entries plus the load errors and the expected rows per table."""

    def __init__(self, entries=(), errors=(), tables=None, root=None):
        super().__init__(entries)
        self.errors = list(errors)
        self.tables = tables or {}
        self.root = root
        self._by_id = {e.id: e for e in self}

    def get(self, ident: str) -> CatalogEntry:
        try:
            return self._by_id[ident]
        except KeyError:
            raise CatalogError(f"unknown id {ident!r}") from None


# ---------------------------------------------------------------- loading


def _face_vectors(g: PolyhedralGraph) -> set:
    at = [[] for _ in range(g.n)]
    for f in g.faces:
        for v in f:
            at[v].append(len(f))
    return {tuple(sorted(x)) for x in at}


def _validate_polyhedron(g: PolyhedralGraph, face_vector: str | None) -> list[str]:
    errs = []
    if g.faces and euler_characteristic(g) != 2:
        errs.append(f"Euler characteristic {euler_characteristic(g)} != 2")
    if face_vector:
        want = tuple(sorted(int(x) for x in face_vector.split(".")))
        got = _face_vectors(g)
        if got != {want}:
            errs.append(f"vertex face sizes {sorted(got)} do not match {face_vector}")
    return errs


def _validate_net(net: PeriodicNet, classes: dict | None) -> list[str]:
    target = classes or {"2": 1}
    errs = []
    for r, want in sorted(target.items()):
        got = len(vertex_homogeneous(net, int(r))[1])
        if got != want:
            errs.append(f"{got} rooted {r}-ball classes, expected {want}")
    return errs


def load_catalog(path=None, validate: bool = True) -> Catalog:
    """Parse and validate every entry under ``path`` (default: shipped data).

    Problems are collected per entry in ``Catalog.errors`` as ``(where,
    message)``; a broken entry is dropped, the rest still load.
    """
    root = Path(path) if path is not None else DATA_DIR
    if not root.is_dir():
        raise CatalogError(f"catalog directory {root} does not exist")
    errors: list[tuple[str, str]] = []
    entries: dict[str, CatalogEntry] = {}
    origin: dict[str, str] = {}

    def add(entry: CatalogEntry, where: str):
        if entry.id in entries:
            errors.append((where, f"duplicate id {entry.id!r}: defined in {origin[entry.id]} and {where}"))
            return
        entries[entry.id] = entry
        origin[entry.id] = where

    tables: dict[str, list[ExpectedRow]] = {}
    rows_by_id: dict[str, dict] = {}
    for f in sorted((root / "expected").glob("*.json")):
        rel = f"expected/{f.name}"
        try:
            doc = json.loads(f.read_text())
            table = doc["table"]
            rows = []
            for rec in doc["rows"]:
                row = ExpectedRow(rec["id"], table, dict(rec["expected"]), dict(rec["cite"]), rec.get("label", ""))
                missing = set(row.fields) - set(row.cite)
                if missing:
                    errors.append((rel, f"{row.id}: no citation for {sorted(missing)}"))
                    continue
                rows.append(row)
                rows_by_id[row.id] = rec
        except (ValueError, KeyError, TypeError) as exc:
            errors.append((rel, f"cannot read expected rows: {exc!r}"))
            continue
        tables[table] = rows

    for f in sorted((root / "poly").glob("*.poly")):
        rel = f"poly/{f.name}"
        try:
            g = parse_poly(f.read_text())
        except (GraphError, ValueError) as exc:
            errors.append((rel, str(exc)))
            continue
        ident = f"T1.{g.name or f.stem}"
        rec = rows_by_id.get(ident, {})
        errs = _validate_polyhedron(g, rec.get("face_vector")) if validate else []
        if errs:
            errors.extend((rel, f"{ident}: {e}") for e in errs)
            continue
        meta = {"vertices": g.n, "edges": len(g.edges), "faces": len(g.faces)}
        if rec.get("face_vector"):
            meta["face_vector"] = rec["face_vector"]
        add(CatalogEntry(ident, "polyhedron", rel, meta), rel)
        add(CatalogEntry(ident + "*", "polyhedron", f"dual of {ident} ({rel})", {"dual_of": ident},
                         is_dual=True), rel)

    for f in sorted((root / "net").glob("*.net")):
        rel = f"net/{f.name}"
        try:
            net = parse_net(f.read_text())
        except (GraphError, ValueError) as exc:
            errors.append((rel, str(exc)))
            continue
        ident = net.name or f.stem
        dual = ident.endswith("*")
        rec = rows_by_id.get(ident, {})
        errs = []
        if validate and not dual:
            errs = _validate_net(net, rec.get("checks", {}).get("ball_classes"))
        if errs:
            errors.extend((rel, f"{ident}: {e}") for e in errs)
            continue
        meta = dict(net.meta)
        meta.update({"motif": net.motif_size, "degrees": sorted({net.degree(i) for i in range(net.motif_size)})})
        meta.update(rec.get("meta", {}))
        add(CatalogEntry(ident, f"net{net.dim}", rel, meta, is_dual=dual), rel)

    for rows in tables.values():
        for row in rows:
            rec = rows_by_id[row.id]
            if "recipe" not in rec:
                continue
            recipe = rec["recipe"]
            kind = ("gap" if "gap" in recipe else "noncompact" if "noncompact" in recipe
                    else "fourpoly" if "fourpoly" in recipe else "generated")
            meta = dict(rec.get("meta", {}))
            if "gap" in rec:
                meta["gap"] = rec["gap"]
            where = f"expected/{row.table}.json"
            add(CatalogEntry(row.id, kind, f"recipe in {where}", meta, recipe=recipe), where)
            if "family" in recipe:
                add(CatalogEntry(row.id + "*", kind, f"recipe in {where}", {"dual_of": row.id},
                                 recipe=recipe, is_dual=True), where)

    for rows in tables.values():
        for row in rows:
            e = entries.get(row.id)
            if e is None:
                errors.append((f"expected/{row.table}.json", f"{row.id}: no catalog entry"))
                continue
            e.expected = row
            if row.dual() and row.id + "*" in entries:
                entries[row.id + "*"].expected = row
    for e in entries.values():
        if e.kind == "generated" and e.recipe and "prism_over" in e.recipe and e.recipe["prism_over"] not in entries:
            errors.append((e.source, f"{e.id}: base {e.recipe['prism_over']} missing"))
    order = {row.id: i for rows in tables.values() for i, row in enumerate(rows)}
    rank = {t: i for i, t in enumerate(TABLES)}
    ordered = sorted(entries.values(), key=lambda e: (rank.get(e.id.split(".")[0], len(rank)),
                                                      order.get(e.id.rstrip("*"), 10**6), e.id))
    return Catalog(ordered, errors, tables, root)


# ---------------------------------------------------------------- building


def build_graph(cat: Catalog, entry: CatalogEntry, n: int | None = None) -> PolyhedralGraph:
    """Finite skeleton of a polyhedron, product or 4-polytope entry."""
    if entry.kind == "polyhedron":
        if entry.is_dual:
            return dual_polyhedron(build_graph(cat, cat.get(entry.meta["dual_of"])))
        return parse_poly((cat.root / entry.source).read_text())
    rc = entry.recipe or {}
    if "family" in rc:
        make = polygen.prism if rc["family"] == "prism" else polygen.antiprism
        g = make(n if n is not None else rc["n"][0])
        return dual_polyhedron(g) if entry.is_dual else g
    if "prism_over" in rc:
        return polygen.product(build_graph(cat, cat.get(rc["prism_over"])), path_graph(2))
    if "duoprism" in rc:
        p, q = rc["duoprism"]
        return polygen.product(cycle_graph(p), cycle_graph(q))
    if "fourpoly" in rc:
        return polygen.skeleton(FOURPOLY[rc["fourpoly"]]())
    raise CatalogError(f"{entry.id} has no finite skeleton")


def build_net(entry: CatalogEntry, root: Path) -> PeriodicNet:
    rc = entry.recipe or {}
    if entry.kind.startswith("net"):
        return parse_net((root / entry.source).read_text())
    if "kelvin" in rc:
        return kelvin_net(rc["kelvin"], elongated=rc.get("elongated", False))
    if "grunbaum" in rc:
        return grunbaum_net(rc["grunbaum"], elongated=rc.get("elongated", False))
    raise CatalogError(f"{entry.id} is not a periodic net")


def is_finite(entry: CatalogEntry) -> bool:
    rc = entry.recipe or {}
    return entry.kind in ("polyhedron", "fourpoly") or any(k in rc for k in ("family", "prism_over", "duoprism"))


def family_members(entry: CatalogEntry) -> list[int | None]:
    rc = entry.recipe or {}
    if "family" in rc and len(rc["n"]) > 1:
        return list(rc["n"])
    if "noncompact" in rc and "n" in rc:
        return list(rc["n"])
    return [None]


# ---------------------------------------------------------------- expected values

_FORMULA = re.compile(r"\{([^{}]*)\}")


def instantiate(value, n):
    """Fill ``{expr}`` templates such as ``1/2 H_{n+2}`` for family member ``n``."""
    if not isinstance(value, str) or "{" not in value:
        return value

    def sub(m):
        expr = m.group(1)
        if not re.fullmatch(r"[n0-9+\-*/() ]+", expr):
            raise CatalogError(f"bad formula {expr!r}")
        return str(eval(expr, {"__builtins__": {}}, {"n": n}))

    out = _FORMULA.sub(sub, value)
    return int(out) if re.fullmatch(r"-?\d+", out) else out


def field_match(key: str, want, got: dict) -> bool:
    if key == "status":
        status = got.get("status", "")
        if want == "non-embeddable":
            return status.startswith("non ")
        return status == want
    if key == "target":
        return got.get("target") == want or want in got.get("alternatives", [])
    return got.get(key) == want


def row_match(want: dict, got: dict) -> bool:
    return bool(want) and all(field_match(k, v, got) for k, v in want.items())


# ---------------------------------------------------------------- pipelines


def _alternatives(g, e: Embedding) -> list[str]:
    """Labels of embeddings of ``g`` not equivalent to ``e`` (small graphs only)."""
    base = e
    if e.scale == 1:
        base = Embedding(2, "halfH", 2 * len(e.cuts), np.hstack([e.coords, e.coords]), cuts=e.cuts + e.cuts)
    found, _ = all_scale2_embeddings(g)
    labels = []
    for other in found:
        if not equivalent(other, base, g.n) and other.label() not in labels:
            labels.append(other.label())
    return sorted(labels)


def _report_status(rep: EmbedReport) -> str:
    if rep.status == "embeds":
        return "embeds"
    if rep.status == "not_embeddable":
        return f"non {rep.certificate.k}-gonal"
    return "inconclusive"


def _finite(g: PolyhedralGraph, want: dict, opts: dict, gid: str, search=None):
    d = all_pairs_distances(g)
    art = {}
    if search:
        iters = min(int(search.get("iters", 10**7)), 10**7)
        res = kgonal_check(d, search["k"], mode="random", seed=opts["seed"], iters=iters, graph_id=gid)
        if isinstance(res, ViolationCertificate):
            if not verify_certificate(d, res):
                raise AssertionError(f"{gid}: certificate failed verification")
            art["certificate"] = dict(res.to_dict(), seed=opts["seed"], iters=iters)
            comp = {"status": f"non {res.k}-gonal"}
        else:
            comp = {"status": "inconclusive", "note": f"{res.evaluations} random evaluations, seed {opts['seed']}"}
        return comp, art
    rep = l1_embed(g, seed=opts["seed"], iters=opts["iters"], graph_id=gid)
    comp = {"status": _report_status(rep)}
    if rep.status == "embeds":
        e = rep.embedding
        if not verify_embedding(d, e):
            raise AssertionError(f"{gid}: embedding failed verification")
        comp["target"] = e.label()
        if g.n <= ALTERNATIVES_MAX_N:
            alts = _alternatives(g, e)
            if alts:
                comp["alternatives"] = alts
        art["embedding"] = e.to_dict(gid)
    elif rep.status == "not_embeddable":
        if not verify_certificate(d, rep.certificate):
            raise AssertionError(f"{gid}: certificate failed verification")
        art["certificate"] = rep.certificate.to_dict()
    if "diameter" in want:
        comp["diameter"] = diameter(g)
    return comp, art


def _periodic(source, radius: int, opts: dict, gid: str):
    rep = periodic_embed(source, radius, seed=opts["seed"], iters=opts["iters"], graph_id=gid)
    comp = {"status": _report_status(rep)}
    art = {"core_radius": rep.core_radius}
    if rep.status == "embeds":
        comp["target"] = rep.summary()
        e = rep.embedding
        art["embedding"] = {"graph": gid, "scale": e.scale, "target": e.target,
                            "dim": "inf" if rep.unbounded else e.dim,
                            "dimension_by_radius": [[int(a), int(b)] for a, b in rep.orbit_growth]}
    elif rep.status == "not_embeddable":
        cert = rep.certificate.to_dict()
        if rep.certificate_keys:
            cert["vertices"] = [_key_text(k) for k in rep.certificate_keys]
        art["certificate"] = cert
    art["reason"] = rep.reason
    return comp, art


def _key_text(key):
    if isinstance(key, tuple) and len(key) == 2 and isinstance(key[1], tuple):
        return [int(key[0]) if isinstance(key[0], (int, np.integer)) else key[0], [int(x) for x in key[1]]]
    return [int(x) if isinstance(x, (int, np.integer)) else x for x in key]


def compute(cat: Catalog, entry: CatalogEntry, want: dict, opts: dict, n=None):
    """Run the pipeline for one entry (family member ``n``); returns (computed, artifacts)."""
    rc = entry.recipe or {}
    gid = entry.id if n is None else f"{entry.id}[n={n}]"
    if is_finite(entry):
        return _finite(build_graph(cat, entry, n), want, opts, gid, rc.get("search"))
    if entry.kind == "noncompact":
        kind, nn = rc["noncompact"], (n if n is not None else 4)
        return _periodic(lambda R: noncompact_patch(kind, R, n=nn), opts["radius"], opts, gid)
    if "isomorphic_to" in want:
        net = build_net(entry, cat.root)
        other = build_net(cat.get(want["isomorphic_to"]), cat.root)
        r = opts["radius"]
        iso = nets_isomorphic(net, other, r)
        return {"isomorphic_to": want["isomorphic_to"] if iso else None, "radius": r}, {}
    return _periodic(build_net(entry, cat.root), opts["radius"], opts, gid)


def run_row(cat: Catalog, ident: str, want: dict, cite: dict, opts: dict) -> dict:
    entry = cat.get(ident)
    t0 = time.perf_counter()
    row = {"id": ident}
    if entry.kind == "gap":
        row.update(computed=None, expected=want, match=None, skipped="SKIPPED-GAP",
                   note=entry.meta.get("gap", ""))
        row["runtime_ms"] = 0
        return row
    members = family_members(entry)
    if members == [None]:
        comp, art = compute(cat, entry, want, opts)
        row.update(computed=comp, expected=want, match=row_match(want, comp))
        row.update(art)
    else:
        comp, exp, ok, arts = {}, {}, True, {}
        for n in members:
            key = f"n={n}"
            exp[key] = {k: instantiate(v, n) for k, v in want.items()}
            comp[key], art = compute(cat, entry, exp[key], opts, n)
            ok = ok and row_match(exp[key], comp[key])
            arts[key] = art
        row.update(computed=comp, expected=exp, match=ok, members=arts)
    row["runtime_ms"] = int(round(1000 * (time.perf_counter() - t0))) if opts.get("timing", True) else None
    return row


def table_rows(cat: Catalog, table: str, expect: dict | None = None) -> list[tuple[str, dict, dict]]:
    """(id, expected fields, citations) for every report row of ``table``, in order."""
    if table not in cat.tables:
        raise CatalogError(f"unknown table {table!r}; expected one of {', '.join(TABLES)}")
    out = []
    for row in cat.tables[table]:
        pairs = [(row.id, row.primal())]
        if ("dual_status" in row.fields) and (row.id + "*") in cat._by_id:
            pairs.append((row.id + "*", row.dual()))
        elif "dual_status" in row.fields and cat.get(row.id).kind == "gap":
            pairs.append((row.id + "*", row.dual()))
        if "isomorphic_to" in row.fields:
            pairs = [(row.id, {"isomorphic_to": row.fields["isomorphic_to"]})]
        for ident, want in pairs:
            if expect is not None and ident in expect:
                want = expect[ident]
            out.append((ident, want, row.cite))
    return out


# worker state for process pools
_WORKER: dict = {}


def _worker_init(root, opts):
    _WORKER["cat"] = load_catalog(root, validate=False)
    _WORKER["opts"] = opts


def _worker_run(task):
    ident, want, cite = task
    cat = _WORKER["cat"]
    if ident not in cat._by_id and ident.endswith("*"):
        return _gap_dual(ident, want)
    return run_row(cat, ident, want, cite, _WORKER["opts"])


def _gap_dual(ident, want):
    return {"id": ident, "computed": None, "expected": want, "match": None, "skipped": "SKIPPED-GAP",
            "runtime_ms": 0}


def reproduce(table: str, radius: int | None = None, seed: int = 1, iters: int = 10**6, jobs: int = 1,
              catalog: Catalog | None = None, expect: dict | None = None, timing: bool = True,
              progress=None) -> dict:
    """Run every row of ``table``; mismatches are report content, not errors."""
    cat = catalog if catalog is not None else load_catalog()
    tasks = table_rows(cat, table, expect)
    opts = {"radius": radius if radius is not None else DEFAULT_RADIUS.get(table, 3),
            "seed": seed, "iters": iters, "timing": timing}
    rows = []
    if jobs <= 1:
        _WORKER.update(cat=cat, opts=opts)
        for t in tasks:
            rows.append(_worker_run(t))
            if progress:
                progress(rows[-1])
    else:
        with ProcessPoolExecutor(max_workers=jobs, initializer=_worker_init, initargs=(str(cat.root), opts)) as ex:
            for row in ex.map(_worker_run, tasks):
                rows.append(row)
                if progress:
                    progress(row)
    scored = [r for r in rows if r["match"] is not None]
    return {"table": table, "radius": opts["radius"], "seed": seed, "iters": iters,
            "matched": sum(r["match"] for r in scored), "scored": len(scored),
            "skipped": len(rows) - len(scored), "rows": rows}


def report_json(report: dict) -> str:
    return json.dumps(_plain(report), indent=1, ensure_ascii=False) + "\n"


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    return x


def _short(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, dict) and all(k.startswith("n=") for k in v):
        return "; ".join(f"{k}: {_short(x)}" for k, x in v.items())
    if isinstance(v, dict):
        parts = [str(v.get("status", ""))]
        if v.get("target"):
            parts.append(v["target"])
        if "alternatives" in v:
            parts.append("(also " + ", ".join(v["alternatives"]) + ")")
        if "diameter" in v:
            parts.append(f"d={v['diameter']}")
        if "isomorphic_to" in v:
            parts = [f"isomorphic to {v['isomorphic_to']}" if v["isomorphic_to"] else "not isomorphic"]
        return " ".join(p for p in parts if p)
    return str(v)


def row_line(row: dict) -> str:
    verdict = row.get("skipped") or ("MATCH" if row["match"] else "MISMATCH")
    ms = "" if row.get("runtime_ms") is None else f" {row['runtime_ms']}ms"
    return f"{row['id']:<28} {verdict:<11} computed: {_short(row['computed'])} | expected: {_short(row['expected'])}{ms}"


def load_expect_file(path) -> dict:
    """Expected fields per row id, from a report (its ``computed``) or an expected-data file."""
    doc = json.loads(Path(path).read_text())
    out = {}
    for rec in doc["rows"]:
        if "computed" in rec:
            if rec["computed"] is not None:
                out[rec["id"]] = {k: v for k, v in rec["computed"].items() if k != "note"} \
                    if not all(k.startswith("n=") for k in rec["computed"]) else None
        else:
            f = rec["expected"]
            out[rec["id"]] = {k: v for k, v in f.items() if not k.startswith("dual_")}
            dual = {k[5:]: v for k, v in f.items() if k.startswith("dual_")}
            if dual:
                out[rec["id"] + "*"] = dual
    return {k: v for k, v in out.items() if v is not None}


# ---------------------------------------------------------------- CLI


def _cmd_list(cat, args):
    for e in cat:
        label = e.expected.label if e.expected else ""
        if e.is_dual:
            label = f"dual of {e.id[:-1]}"
        print(f"{e.id:<32} {e.kind:<11} {label}")
    for where, msg in cat.errors:
        print(f"error: {where}: {msg}", file=sys.stderr)
    return 0


def _cmd_show(cat, args):
    e = cat.get(args.id)
    print(f"id: {e.id}")
    print(f"kind: {e.kind}")
    print(f"source: {e.source}")
    if e.recipe:
        print(f"recipe: {json.dumps(e.recipe)}")
    for k, v in e.meta.items():
        print(f"meta {k}: {v}")
    if e.expected is None:
        print("expected: (none)")
        return 0
    row = e.expected
    print(f"row: {row.label}")
    fields = row.dual() if e.is_dual else row.primal()
    if "isomorphic_to" in row.fields:
        fields = {"isomorphic_to": row.fields["isomorphic_to"]}
    for k, v in fields.items():
        key = f"dual_{k}" if e.is_dual else k
        print(f"expected {k}: {v}    [{row.cite.get(key, '')}]")
    return 0


def _cmd_build(cat, args):
    e = cat.get(args.id)
    if e.kind == "gap":
        print(f"{e.id}: known gap, no data ({e.meta.get('gap', '')})")
        return 2
    ok = True
    if is_finite(e):
        for n in family_members(e):
            g = build_graph(cat, e, n)
            tag = "" if n is None else f"[n={n}] "
            print(f"{e.id} {tag}vertices {g.n} edges {len(g.edges)} faces {len(g.faces)} "
                  f"degrees {sorted(set(g.degrees()))} diameter {diameter(g)}")
        return 0
    if e.kind == "noncompact":
        r = args.radius or 3
        for n in family_members(e):
            p = noncompact_patch(e.recipe["noncompact"], 3 * r, n=n if n is not None else 4)
            print(f"{e.id} {'' if n is None else f'[n={n}] '}ball of radius {3 * r}: {len(p.keys)} vertices, "
                  f"core of radius {r}: {p.core_size} vertices")
        return 0
    net = build_net(e, cat.root)
    r = args.radius or 2
    b = ball(net, 0, r)
    homo, classes = vertex_homogeneous(net, r)
    print(f"{e.id} dim {net.dim} motif {net.motif_size} quotient edges {len(net.edges) // 2} "
          f"degrees {sorted({net.degree(i) for i in range(net.motif_size)})}")
    print(f"ball of radius {r} around vertex 0: {b.n} vertices; rooted {r}-ball classes {len(classes)}"
          f"{' (vertex homogeneous)' if homo else ''}")
    want = e.expected.fields.get("isomorphic_to") if e.expected else None
    if want:
        iso = nets_isomorphic(net, build_net(cat.get(want), cat.root), r)
        print(f"isomorphic to {want} at r={r}: {'yes' if iso else 'no'}")
        ok = iso
    return 0 if ok else 1


def _expected_fields(e: CatalogEntry) -> dict:
    if e.expected is None:
        return {}
    return e.expected.dual() if e.is_dual else e.expected.primal()


def _cmd_check(cat, args):
    e = cat.get(args.id)
    k = args.k
    if is_finite(e):
        n = family_members(e)[0]
        g = build_graph(cat, e, n)
        d = all_pairs_distances(g)
    elif e.kind.startswith("net") or e.kind == "noncompact" or e.recipe and ("kelvin" in e.recipe or "grunbaum" in e.recipe):
        r = args.radius or 3
        if e.kind == "noncompact":
            patch = noncompact_patch(e.recipe["noncompact"], 3 * r, n=family_members(e)[0] or 4)
        else:
            patch = expand_patch(build_net(e, cat.root), 3 * r)
        d = patch.metric(3 * r // 2)
        print(f"exact ball of radius {3 * r // 2}: {d.shape[0]} vertices")
    else:
        raise CatalogError(f"{e.id} has nothing to check")
    n = d.shape[0]
    if args.seed is not None:
        mode = "random"
    elif (k == 5 and n <= 120) or (k == 7 and n <= 30):
        mode = "exhaustive"
    else:
        mode = "fixed"
    res = kgonal_check(d, k, mode=mode, seed=args.seed, iters=args.iters, graph_id=e.id)
    if isinstance(res, ViolationCertificate):
        assert verify_certificate(d, res)
        print(json.dumps(res.to_dict()))
        print(f"{e.id}: violated {k}-gonal inequality, margin {res.margin} (verified)")
        return 0
    print(f"{e.id}: no {k}-gonal violation ({mode}, {'conclusive' if res.conclusive else 'inconclusive'})")
    want = _expected_fields(e).get("status", "")
    return 1 if want == f"non {k}-gonal" else 0


def _cmd_embed(cat, args):
    e = cat.get(args.id)
    if e.kind == "gap":
        print(f"{e.id}: known gap, no data")
        return 2
    want = _expected_fields(e)
    opts = {"radius": args.radius or 3, "seed": args.seed, "iters": args.iters}
    n = family_members(e)[0]
    if n is not None:
        want = {k: instantiate(v, n) for k, v in want.items()}
    comp, art = compute(cat, e, want, opts, n)
    print(f"{e.id}: {_short(comp)}")
    if "embedding" in art:
        emb = art["embedding"]
        if "coords" in emb:
            for v, row in enumerate(emb["coords"]):
                print(f"{v}: {' '.join(str(int(x)) for x in row)}")
        else:
            print(json.dumps(emb))
    if "certificate" in art:
        print(json.dumps(art["certificate"]))
    if art.get("reason"):
        print(art["reason"])
    if want:
        return 0 if row_match(want, comp) else 1
    return 0 if comp.get("status") == "embeds" else 1


def _cmd_reproduce(cat, args):
    expect = load_expect_file(args.expect) if args.expect else None
    rep = reproduce(args.table, radius=args.radius, seed=args.seed, iters=args.iters, jobs=args.jobs,
                    catalog=cat, expect=expect, timing=not args.no_timing,
                    progress=lambda row: print(row_line(row), flush=True))
    print(f"{rep['table']}: {rep['matched']}/{rep['scored']} rows match"
          + (f", {rep['skipped']} skipped (known gap)" if rep["skipped"] else ""))
    if args.out:
        Path(args.out).write_text(report_json(rep))
    return 0 if rep["matched"] == rep["scored"] else 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="l1tiling", description="l1-embeddability of polyhedra, tilings and partitions")
    p.add_argument("--data", help="catalog directory (default: shipped data)")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    sub.add_parser("list", help="list catalog entries")
    s = sub.add_parser("show", help="entry metadata and cited expected values")
    s.add_argument("id")
    s = sub.add_parser("build", help="build an entry and run its validation checks")
    s.add_argument("id")
    s.add_argument("--radius", type=int)
    s = sub.add_parser("check", help="search for a violated k-gonal inequality")
    s.add_argument("id")
    s.add_argument("--k", type=int, choices=(5, 7), default=5)
    s.add_argument("--seed", type=int)
    s.add_argument("--iters", type=int, default=10**6)
    s.add_argument("--radius", type=int)
    s = sub.add_parser("embed", help="find an l1-embedding or a certificate")
    s.add_argument("id")
    s.add_argument("--radius", type=int)
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--iters", type=int, default=10**6)
    s = sub.add_parser("reproduce", help="recompute a table and diff it against the expected values")
    s.add_argument("table")
    s.add_argument("--radius", type=int)
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--iters", type=int, default=10**6)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out")
    s.add_argument("--expect")
    s.add_argument("--no-timing", action="store_true", help="write runtime_ms as null (byte-stable reports)")
    return p


COMMANDS = {"list": _cmd_list, "show": _cmd_show, "build": _cmd_build, "check": _cmd_check,
            "embed": _cmd_embed, "reproduce": _cmd_reproduce}


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cat = load_catalog(args.data, validate=args.cmd in ("list", "build"))
        if args.cmd != "list":
            for where, msg in cat.errors:
                print(f"warning: {where}: {msg}", file=sys.stderr)
        return COMMANDS[args.cmd](cat, args)
    except (CatalogError, OSError, json.JSONDecodeError) as exc:
        print(f"l1tiling: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
