"""Periodic nets in the plane and their lattice embeddings.

A net is a finite quotient graph with translation labels. The embedder
expands a ball of radius 3r around a motif vertex, decides embeddability on
the ball of radius 3r/2 (where patch distances equal the distances of the
infinite graph) and reads the dimension off growing exact balls.
"""
from l1tiling.catalog import build_net, load_catalog
from l1tiling.embedder import periodic_embed

cat = load_catalog()

for ident in ("T2.01", "T2.02", "T2.01*", "T2.02*", "T2.05", "T2.05*"):
    entry = cat.get(ident)
    rep = periodic_embed(build_net(entry, cat.root), r=4, graph_id=ident)
    want = entry.expected.dual() if entry.is_dual else entry.expected.primal()
    label = ("dual of " if entry.is_dual else "") + entry.expected.label
    print(f"{ident:7s} {label:34s} computed {rep.summary():14s} "
          f"expected {want.get('status')} {want.get('target', '')}")
    if rep.status == "embeds":
        print("        dimension by ball radius:", [tuple(map(int, x)) for x in rep.orbit_growth])
