"""Four-dimensional polytopes built from exact coordinates.

The 600-cell is assembled in Q(sqrt 5), its skeleton read off from the
exact edge length. Its 7-gonal violation is found by a seeded random search;
the grand antiprism (the 600-cell minus 20 vertices on two orthogonal
decagons) needs about as few samples. The snub 24-cell embeds in 1/2 H_12.
"""
from l1tiling.embedder import l1_embed
from l1tiling.graphcore import all_pairs_distances, diameter
from l1tiling.hypermetric import kgonal_check, verify_certificate
from l1tiling.polygen import cell600, grand_antiprism, skeleton, snub24cell

for name, make in (("600-cell", cell600), ("grand antiprism", grand_antiprism)):
    g = skeleton(make())
    d = all_pairs_distances(g)
    cert = kgonal_check(d, 7, mode="random", seed=1, iters=10**7, graph_id=name)
    print(f"{name}: {g.n} vertices, {len(g.edges)} edges, diameter {diameter(g)}")
    print(f"  violation {cert.to_dict()}  verified={verify_certificate(d, cert)}")

g = skeleton(snub24cell())
rep = l1_embed(g)
print(f"snub 24-cell: {g.n} vertices, embeds {rep.summary()}")
