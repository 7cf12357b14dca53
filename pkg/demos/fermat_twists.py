"""Diagonal twists of the Fermat quartic and how to tell them apart.

Run: python3 demos/fermat_twists.py
"""

from quartwist import twistgen as tg
from quartwist.projgroup import generate_group
from quartwist.verify import check_equivalence, fermat_diagonal_equivalent, verify_twist

# a x^4 + b y^4 + z^4 becomes the Fermat curve over Q(i, a^(1/4), b^(1/4))
t = tg.fermat_diagonal(2, 3)
print("curve:", t.curve)
print("tower degree:", t.tower.degree)
rep = verify_twist(t)
print("isomorphism, rationality, cocycle:", rep.iso_ok, rep.rational_ok, rep.cocycle_ok)

# build several twists in one tower so the exact equivalence search can compare them
fb = tg.new_builder()
params = [(1, 1), (16, 1), (2, 2), (2, 8), (3, 1)]
ts = {p: tg.fermat_diagonal(*p, builder=fb) for p in params}
T = fb.tower
ts = {p: x.lift_to(T) for p, x in ts.items()}
G = generate_group(ts[(1, 1)].aut, tower=T)
print("|Aut(Fermat)| =", G.order)

for p in params[1:]:
    w = check_equivalence(ts[(1, 1)], ts[p], G)
    quick = fermat_diagonal_equivalent(1, 1, *p)
    print("(1,1) vs %-7s search: %-5s fourth-power classes: %s" % (p, w is not None, quick))
