"""Finite polyhedra: an embedding, a refutation and a non-rigid case.

The cube is a hypercube graph, so it embeds at scale 1 and the coordinates
are its vertex labels in H_3. The cuboctahedron already fails a 5-gonal
inequality, and the certificate is five vertices with a sign vector that can
be checked by hand from the distance matrix. The tetrahedron embeds in two
inequivalent ways (1/2 H_3 and 1/2 H_4).
"""
import numpy as np

from l1tiling.catalog import build_graph, load_catalog
from l1tiling.embedder import l1_embed, rigidity_check, verify_embedding
from l1tiling.graphcore import all_pairs_distances
from l1tiling.hypermetric import verify_certificate

cat = load_catalog()

cube = build_graph(cat, cat.get("T1.cube"))
rep = l1_embed(cube)
print("cube:", rep.summary())
print(rep.embedding.coords)
assert verify_embedding(cube, rep.embedding)

cubo = build_graph(cat, cat.get("T1.cuboctahedron"))
rep = l1_embed(cubo, graph_id="cuboctahedron")
cert = rep.certificate
print("\ncuboctahedron:", rep.summary(), cert.to_dict())
d = all_pairs_distances(cubo)
b = np.array(cert.signs)
sub = d[np.ix_(cert.points, cert.points)]
print("sum_{i<j} b_i b_j d_ij =", int(b @ sub @ b) // 2, "(a 5-gonal metric needs <= 0)")
assert verify_certificate(d, cert)

tet = build_graph(cat, cat.get("T1.tetrahedron"))
e = l1_embed(tet).embedding
rigid = rigidity_check(tet, e)
print("\ntetrahedron:", e.label(), "rigid" if rigid is True else f"not rigid, also {rigid[1].label()}")
