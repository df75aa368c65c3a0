"""l1-embeddability of polyhedra, plane tilings and space partitions.

Skeleton graphs are built exactly (polyhedra, products, 4-polytopes, periodic
nets), embedded into hypercubes, half-cubes and cubic lattices at scale 1
or 2, or refuted by a verified 5- or 7-gonal inequality.
"""
from .embedder import EmbedReport, Embedding, l1_embed, periodic_embed, verify_embedding
from .graphcore import PolyhedralGraph, all_pairs_distances, diameter, dual_polyhedron, isomorphic
from .hypermetric import Pass, ViolationCertificate, kgonal_check, verify_certificate
from .periodicnet import PeriodicNet, expand_patch, grunbaum_net, kelvin_net, parse_net, vertex_homogeneous

__version__ = "0.1.0"

__all__ = [
    "EmbedReport", "Embedding", "l1_embed", "periodic_embed", "verify_embedding",
    "PolyhedralGraph", "all_pairs_distances", "diameter", "dual_polyhedron", "isomorphic",
    "Pass", "ViolationCertificate", "kgonal_check", "verify_certificate",
    "PeriodicNet", "expand_patch", "grunbaum_net", "kelvin_net", "parse_net", "vertex_homogeneous",
]
