"""Lengths 2 arccosh(1 + 2u^2) for units of the cubic field of 2cos(2pi/7).

Every length is checked against the translation length of C1 C2 in the
hexagon group built from u.  Run: python3 demos/density_sweep.py
"""

from fractions import Fraction

import mpmath

from semiarith import intervals as ivl
from semiarith.numfield import make_field
from semiarith.surfaces import density_sweep

K = make_field([-1, -2, 1, 1])
u = K.gen
res = density_sweep(K, [u, u + 1], (Fraction(1, 2), 10), 12, realize=True)

print("%d lengths in [0.5, 10], largest gap %s" % (len(res), mpmath.nstr(res.max_gap, 8)))
for rec in list(res)[::12]:
    mid = (ivl.lo(rec.length) + ivl.hi(rec.length)) / 2
    print("  u = %-28s length %s  %s" % (rec.unit, mpmath.nstr(mid, 12), rec.certificate_status))
