"""
Degenerate multiplication maps and Hilbert functions
====================================================

The Cartan component map V(lam+mu) -> V(lam) (x) V(mu) is filtered on
both sides; surjectivity of the degenerate multiplication is equivalent
to this map being injective with strictly compatible filtrations.  The
table below tracks, degree by degree, the dimension of the image of the
degree-n piece against its meet with the degree-n piece of the tensor
side: equal columns all the way down means gr-injective.
"""

from pbwdeg.chevrep import chevalley_constants
from pbwdeg.degenring import (check_degree_one_generation,
                              check_mult_surjective, hilbert_function)
from pbwdeg.rootsys import build_root_system

rs = build_root_system("A2")
sc = chevalley_constants(rs)

rep = check_mult_surjective(rs, sc, (1, 1), (1, 1), 2)
print("A2, lambda = mu = (1,1), p = 2")
print(f"{'n':<4}{'phi_dim':<9}meet_dim")
for n, a, b in rep.table:
    print(f"{n:<4}{a:<9}{b}")
print("injective:", rep.injective_ungraded, " strict:", rep.strict)
print("degenerate multiplication surjective:", rep.verdict_mult_surjective)
print(rep.note)

gen = check_degree_one_generation(rs, sc, (1, 1), 2, 3)
print("\ndegree-one generation up to n =", gen.per_n[-1][0], "->",
      gen.generated)

hil = hilbert_function(rs, sc, (1, 1), 2, 3)
print("\nHilbert function of the degenerate ring section by section:")
for n, h, w in hil.values:
    print(f"  h({n}) = {h}   (classical value {w})")
