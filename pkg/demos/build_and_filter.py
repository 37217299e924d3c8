"""
Build a Weyl module mod p and inspect its PBW filtration
========================================================

"""

from pbwdeg.pbwgrade import pbw_filtration
from pbwdeg.rootsys import build_root_system
from pbwdeg.weylmod import build_weyl_lattice, build_weyl_module_p, weyl_dim

CARTAN = "C2"
WEIGHT = (1, 1)
P = 2

rs = build_root_system(CARTAN)
print(f"type {CARTAN}, rank {rs.rank}, positive roots:")
for beta in rs.positive_roots:
    print("  ", beta, " height", sum(beta))

# the integral form first: its rank must equal the Weyl dimension formula
lat = build_weyl_lattice(rs, WEIGHT)
print(f"\nV_Z{WEIGHT}: rank {lat.dim} (formula says {weyl_dim(rs, WEIGHT)})")

mod = build_weyl_module_p(rs, P, WEIGHT)
print(f"\nV{WEIGHT} over F_{P}: dim {mod.dim}")
print("weight multiplicities:")
for w, m in sorted(mod.weight_multiplicities().items()):
    print("  ", w, "x", m)

# the filtration by the number of lowering operators applied to the
# highest weight vector; its top degree and layer dimensions
graded = pbw_filtration(mod)
print("\nPBW graded dimensions:", graded.graded_dims)
print("cumulative:           ", graded.cumulative_dims())
print("sum of layers:", sum(graded.graded_dims), "== dim:", mod.dim)
