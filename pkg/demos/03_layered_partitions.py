"""Stacking words for layered space fillings.

``kelvin_net(word)`` stacks close-packed layers, ``grunbaum_net(word)``
stacks square grids joined by prism slabs; ``elongated=True`` inserts an
extra slab between layers. Short words reproduce catalogued tilings, which
is checked here by comparing rooted balls. Longer words give vertex stars
that agree at radius 1 but split at radius 2.
"""
from l1tiling.catalog import build_net, load_catalog
from l1tiling.periodicnet import grunbaum_net, kelvin_net, nets_isomorphic, vertex_homogeneous

cat = load_catalog()

pairs = [(kelvin_net("a"), "T3.05"), (kelvin_net("ab"), "T3.24"),
         (grunbaum_net("a"), "T3.03"), (grunbaum_net("ab"), "T3.27")]
for net, ident in pairs:
    other = build_net(cat.get(ident), cat.root)
    print(f"{net.name:14s} ~ {ident}: {nets_isomorphic(net, other, 2)}")

print()
for word in ("aab", "aabb"):
    for make in (kelvin_net, grunbaum_net):
        net = make(word, elongated=True)
        h1, c1 = vertex_homogeneous(net, 1)
        h2, c2 = vertex_homogeneous(net, 2)
        print(f"{net.name:22s} classes at r=1: {len(c1)}  at r=2: {len(c2)}")
