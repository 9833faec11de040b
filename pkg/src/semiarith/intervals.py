"""Certified real intervals on top of ``mpmath.iv``.

Exact scalars (int, Fraction, field and tower elements) are turned into
enclosures with :func:`enclose`; anything exposing an ``enclose(prec)``
method takes part.  Signs of exact scalars are decided by an exact zero
test followed by refinement, so they never depend on a tolerance.
"""

from contextlib import contextmanager
from fractions import Fraction

import mpmath
from mpmath import iv

_Constant = type(mpmath.pi)

DEFAULT_PREC = 128
MAX_PREC = 1 << 16


@contextmanager
def precision(bits):
    """Temporarily raise the working precision of ``iv`` to ``bits``."""
    old = iv.prec
    iv.prec = max(int(bits), 53)
    try:
        yield
    finally:
        iv.prec = old


def is_interval(x):
    return isinstance(x, iv.mpf)


def from_fraction(q):
    q = Fraction(q)
    if q.denominator == 1:
        return iv.mpf(q.numerator)
    return iv.mpf(q.numerator) / q.denominator


def enclose(x, prec=DEFAULT_PREC):
    """Interval enclosure of ``x`` computed at ``prec`` bits."""
    if is_interval(x):
        return x
    if isinstance(x, (int, Fraction)):
        with precision(prec):
            return from_fraction(x)
    if hasattr(x, "enclose"):
        return x.enclose(prec)
    if isinstance(x, _Constant):
        # pi, e and friends: round the defining series both ways
        with precision(prec):
            return iv.mpf((mpmath.mpf(x.func(prec, "f")), mpmath.mpf(x.func(prec, "c"))))
    raise TypeError("cannot enclose %r" % (x,))


def mpf_to_fraction(x):
    """Exact value of a finite binary mpf."""
    if not isinstance(x, mpmath.mpf):
        x = mpmath.mpf(x)
    if x == 0:
        return Fraction(0)
    man, exp = x.man_exp
    return Fraction(int(man)) * (Fraction(2) ** int(exp))


def _endpoint(raw):
    # exact conversion; plain mpf(x.a) would round to the global precision
    with mpmath.workprec(max(raw[3], 53) + 8):
        return mpmath.mpf(raw)


def lo(x):
    return _endpoint(x._mpi_[0])


def hi(x):
    return _endpoint(x._mpi_[1])


def width(x):
    with mpmath.workprec(64):
        return hi(x) - lo(x)


def hull(a, b):
    return iv.mpf([min(lo(a), lo(b)), max(hi(a), hi(b))])


def contains_zero(x):
    return lo(x) <= 0 <= hi(x)


def is_exact_zero(x):
    if isinstance(x, (int, Fraction)):
        return x == 0
    if hasattr(x, "is_zero"):
        return x.is_zero()
    return False


def sign(x, max_prec=MAX_PREC):
    """Sign of a scalar.

    Exact scalars get an exact answer.  For an interval the answer is
    returned only when the enclosure excludes zero; otherwise ``None``.
    """
    if isinstance(x, (int, Fraction)):
        return (x > 0) - (x < 0)
    if is_interval(x):
        if lo(x) > 0:
            return 1
        if hi(x) < 0:
            return -1
        return None
    if is_exact_zero(x):
        return 0
    prec = 64
    while prec <= max_prec:
        e = enclose(x, prec)
        if lo(e) > 0:
            return 1
        if hi(e) < 0:
            return -1
        prec *= 2
    raise ArithmeticError("sign undecided at %d bits" % max_prec)


def clip_below(x, bound):
    """Intersect ``x`` with ``[bound, oo)``; used where the math guarantees it."""
    return iv.mpf([max(lo(x), bound), max(hi(x), bound)])


def max_one(x):
    return iv.mpf([max(lo(x), 1), max(hi(x), 1)])


def iabs(x):
    if lo(x) >= 0:
        return x
    if hi(x) <= 0:
        return -x
    return iv.mpf([0, max(-lo(x), hi(x))])


def acosh(x):
    """Enclosure of arccosh on ``[1, oo)`` via log(x + sqrt(x^2 - 1))."""
    x = clip_below(x, 1)
    return iv.log(x + iv.sqrt(clip_below(x * x - 1, 0)))


def cosh(x):
    e = iv.exp(x)
    return (e + 1 / e) / 2


def sinh(x):
    e = iv.exp(x)
    return (e - 1 / e) / 2


def refine(func, tol, start=DEFAULT_PREC, relative=False):
    """Call ``func(prec)`` with doubling precision until the width is small.

    ``tol`` is absolute unless ``relative`` is set, in which case it bounds
    width / |midpoint|.
    """
    prec = start
    while True:
        with precision(prec + 16):
            val = func(prec)
        w = width(val)
        if relative:
            m = abs(lo(val)) if lo(val) != 0 else abs(hi(val))
            ok = m > 0 and w <= tol * m or w == 0
        else:
            ok = w <= tol
        if ok:
            return val
        if prec >= MAX_PREC:
            raise ArithmeticError("could not reach width %s" % (tol,))
        prec *= 2
