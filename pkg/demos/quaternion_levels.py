"""Norm-one units of the order Z<i, j> in (2, 3 | Q) at levels 2, 3, 5.

Run: python3 demos/quaternion_levels.py
"""

from math import log

import mpmath

from semiarith import intervals as ivl
from semiarith.numfield import QQ_FIELD
from semiarith.quaternion import enumerate_norm_one, make_algebra, systole_experiment

A = make_algebra(QQ_FIELD, 2, 3)
box = enumerate_norm_one(A, 25)
print("%d norm-one elements with coefficients in [-25, 25]" % len(box))

for n in (2, 3, 5):
    rep = systole_experiment(A, n, 25, box)
    shortest = (ivl.lo(rep.min_length) + ivl.hi(rep.min_length)) / 2
    print("level %d: %4d elements, shortest %s, floor 4 log %d - 4 log 2 = %.4f, violations %d"
          % (n, rep.samples, mpmath.nstr(shortest, 10), n, 4 * log(n) - 4 * log(2),
             len(rep.violations)))
