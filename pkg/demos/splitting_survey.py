"""Survey the splitting criterion over small types and primes.

For each (type, p) the module with highest weight 2(p-1)rho is built over
F_p and the product of all top divided powers of the lowering operators
is applied to the highest weight vector.  A nonzero result in the top
graded piece is the criterion; the degree column is the filtration level
where the image lands.
"""

from pbwdeg.chevrep import chevalley_constants
from pbwdeg.pbwgrade import check_f0
from pbwdeg.rootsys import build_root_system, splitting_weight

CASES = [("A1", 2), ("A1", 3), ("A1", 5), ("A2", 2), ("A2", 3),
         ("B2", 2), ("C2", 3), ("G2", 2)]

print(f"{'type':<6}{'p':<4}{'weight':<12}{'dim':<8}{'degree':<8}nonzero")
for name, p in CASES:
    rs = build_root_system(name)
    lam = splitting_weight(rs, p)
    rep = check_f0(rs, chevalley_constants(rs), p)
    dim = (2 * p - 1) ** len(rs.positive_roots)
    print(f"{name:<6}{p:<4}{str(lam):<12}{dim:<8}{rep.degree:<8}{rep.nonzero}")
