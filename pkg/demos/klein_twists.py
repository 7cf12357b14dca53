"""Twists of the Klein quartic: a few rows of the twist table, verified exactly.

Run: python3 demos/klein_twists.py
"""

from quartwist import twistgen as tg
from quartwist.projgroup import fingerprint, identify
from quartwist.verify import aut_group, verify_twist

first = tg.klein_twist(1)
print("Aut(Klein):", identify(fingerprint(aut_group(first))))

for row, params in [(1, None), (2, {"m": 2}), (2, {"m": -1})]:
    t = tg.klein_twist(row, params)
    rep = verify_twist(t)
    print("row %d %-12s degree %3d  ok=%s" % (row, params or {}, t.tower.degree, rep.ok()))
    print("   ", t.curve)
