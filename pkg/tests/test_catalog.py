import json
import shutil
import subprocess
import sys

import pytest

from l1tiling.catalog import (DATA_DIR, CatalogError, instantiate, load_catalog, main, reproduce,
                              report_json, row_match)


def test_shipped_counts(catalog):
    assert catalog.errors == []
    ids = [e.id for e in catalog]
    t1 = [i for i in ids if i.startswith("T1.")]
    assert len([i for i in t1 if not i.endswith("*")]) == 20
    assert len([i for i in t1 if i.endswith("*")]) == 20
    t2 = [i for i in ids if i.startswith("T2.")]
    assert len(t2) == 22
    t3 = [i for i in ids if i.startswith("T3.")]
    assert len(t3) == 56
    t4 = {i.rstrip("*").split("-")[0] for i in ids if i.startswith("T4.")}
    assert t4 == {f"T4.{k}" for k in range(29, 47)}
    assert catalog.get("T4.35").kind == "gap"


def test_every_expected_field_cited(catalog):
    for rows in catalog.tables.values():
        for row in rows:
            assert set(row.fields) <= set(row.cite)
            assert all(row.cite[k] for k in row.fields)


def test_unknown_id(catalog):
    with pytest.raises(CatalogError):
        catalog.get("T9.99")


def _copy_data(tmp_path):
    root = tmp_path / "data"
    shutil.copytree(DATA_DIR, root)
    return root


def test_corrupt_net_is_entry_level_error(tmp_path):
    root = _copy_data(tmp_path)
    (root / "net" / "T3.07.net").write_text("net T3.07\ndim 3\nvertex a 0 0 0\nedge a a 0 0 0\n")
    cat = load_catalog(root, validate=False)
    assert any(where == "net/T3.07.net" for where, _ in cat.errors)
    with pytest.raises(CatalogError):
        cat.get("T3.07")
    assert cat.get("T3.08").kind == "net3" and cat.get("T3.07*")


def test_duplicate_id_names_both_files(tmp_path):
    root = _copy_data(tmp_path)
    shutil.copy(root / "net" / "T3.09.net", root / "net" / "zz_copy.net")
    cat = load_catalog(root, validate=False)
    msgs = [m for _, m in cat.errors if "duplicate" in m]
    assert len(msgs) == 1
    assert "net/T3.09.net" in msgs[0] and "net/zz_copy.net" in msgs[0]


def test_failed_validation_reported(tmp_path):
    root = _copy_data(tmp_path)
    text = (root / "poly" / "cube.poly").read_text()
    (root / "poly" / "cube.poly").write_text(text.replace("poly cube", "poly cuboctahedron"))
    cat = load_catalog(root)
    assert any("face sizes" in m for _, m in cat.errors)


def test_formula_templates():
    assert instantiate("1/2 H_{n+2}", 7) == "1/2 H_9"
    assert instantiate("{(n+2)//2}", 7) == 4
    with pytest.raises(CatalogError):
        instantiate("{__import__('os')}", 1)


def test_match_rules():
    assert row_match({"status": "non-embeddable"}, {"status": "non 5-gonal"})
    assert not row_match({"status": "non 7-gonal"}, {"status": "non 5-gonal"})
    assert row_match({"status": "embeds", "target": "1/2 H_3"},
                     {"status": "embeds", "target": "1/2 H_4", "alternatives": ["1/2 H_3"]})
    assert not row_match({"status": "embeds", "target": "Z_4"}, {"status": "embeds", "target": "Z_5"})


def test_report_deterministic_across_jobs(catalog):
    a = report_json(reproduce("T1", catalog=catalog, timing=False))
    b = report_json(reproduce("T1", catalog=catalog, timing=False, jobs=2))
    assert a == b
    rows = json.loads(a)["rows"]
    assert [r["id"] for r in rows][:4] == ["T1.tetrahedron", "T1.tetrahedron*", "T1.cube", "T1.cube*"]
    assert set(rows[0]) >= {"id", "computed", "expected", "match", "runtime_ms"}


def test_cli_exit_codes(capsys):
    assert main(["show", "T9.99"]) == 2
    assert "unknown id" in capsys.readouterr().err
    assert main(["reproduce", "T7"]) == 2
    assert "unknown table" in capsys.readouterr().err
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_cli_check_cuboctahedron(capsys):
    assert main(["check", "T1.cuboctahedron", "--k", "5"]) == 0
    out = capsys.readouterr().out
    cert = json.loads(out.splitlines()[0])
    assert cert["k"] == 5 and cert["margin"] > 0


def test_cli_embed_cube(capsys):
    assert main(["embed", "T1.cube"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("T1.cube: embeds H_3")
    coords = [tuple(map(int, l.split(":")[1].split())) for l in lines[1:9]]
    assert sorted(coords) == sorted({(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)})


def test_cli_show_citations(capsys):
    assert main(["show", "T3.09"]) == 0
    out = capsys.readouterr().out
    assert "expected target: Z_9" in out and "[Table 3, row 9, column 6]" in out
    assert main(["show", "T3.15*"]) == 0
    assert "1/2 Z_inf" in capsys.readouterr().out


def test_cli_build_generated(capsys):
    assert main(["build", "G.grunbaum.ab"]) == 0
    assert "isomorphic to T3.27 at r=2: yes" in capsys.readouterr().out


def test_cli_reproduce_with_out_and_expect(tmp_path, capsys):
    out = tmp_path / "g.json"
    assert main(["reproduce", "G", "--out", str(out), "--no-timing"]) == 0
    rep = json.loads(out.read_text())
    assert len(rep["rows"]) == 8 and all(r["match"] for r in rep["rows"])
    assert rep["rows"][0]["runtime_ms"] is None
    # a saved report works as the expectation of a rerun
    assert main(["reproduce", "P4", "--expect", str(tmp_path / "missing.json")]) == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "l1tiling", "show", "T1.cube"], capture_output=True, text=True)
    assert res.returncode == 0 and "expected target: H_3" in res.stdout


def test_gap_rows_skipped(catalog):
    from l1tiling.catalog import run_row
    row = run_row(catalog, "T4.36", {"status": "embeds", "target": "Z_4"}, {}, {"radius": 3, "seed": 1, "iters": 1})
    assert row["skipped"] == "SKIPPED-GAP" and row["match"] is None
