"""Quaternion algebras (a, b | K) over totally real fields and their
congruence subgroups acting on products of hyperbolic planes.

The order is Q = O[1, i, j, k] with i^2 = a, j^2 = b, k = ij = -ji.
Coordinates are taken on the power basis of K, so coefficient bounds and
ideal membership refer to that basis.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import sqrt

import mpmath
from mpmath import iv

from . import intervals as ivl
from .errors import EmptySample, NotNormOne, UnsupportedIdeal, ValidationError, ZeroParameter
from .hypgeom import Isometry
from .numfield import AlgebraicNumber, NumberField, QQ_FIELD, as_number, is_algebraic_integer


@dataclass(frozen=True)
class QuatAlgebra:
    base: NumberField
    a: AlgebraicNumber
    b: AlgebraicNumber
    split_places: tuple
    ramified_real: tuple

    @property
    def d(self):
        return self.base.degree

    @property
    def r(self):
        return len(self.split_places)

    def element(self, *coords):
        if len(coords) == 1 and isinstance(coords[0], (list, tuple)):
            coords = coords[0]
        if len(coords) != 4:
            raise ValidationError("a quaternion has four coordinates")
        return QuatElement(self, tuple(self.base(c) for c in coords))

    def one(self):
        return self.element(1, 0, 0, 0)

    def to_json(self):
        return {"field": list(map(int, self.base.minpoly)), "a": [str(c) for c in self.a.coords],
                "b": [str(c) for c in self.b.coords], "split_places": list(self.split_places),
                "ramified_real": list(self.ramified_real)}


def make_algebra(K, a, b):
    """(a, b | K); a real place is ramified iff a and b are both negative there."""
    a, b = as_number(a, K), as_number(b, K)
    if a.is_zero() or b.is_zero():
        raise ZeroParameter("quaternion parameters must be nonzero")
    if not (is_algebraic_integer(a) and is_algebraic_integer(b)):
        raise ValidationError("quaternion parameters must be algebraic integers")
    split, ram = [], []
    for i in range(K.degree):
        if a.sign(i) < 0 and b.sign(i) < 0:
            ram.append(i)
        else:
            split.append(i)
    # the distinguished embedding goes first among the split places
    if K.index in split:
        split.remove(K.index)
        split.insert(0, K.index)
    return QuatAlgebra(K, a, b, tuple(split), tuple(ram))


class QuatElement:
    __slots__ = ("algebra", "coords")

    def __init__(self, algebra, coords):
        self.algebra = algebra
        self.coords = tuple(coords)

    def __mul__(self, other):
        A = self.algebra
        a, b = A.a, A.b
        x0, x1, x2, x3 = self.coords
        y0, y1, y2, y3 = other.coords
        z0 = x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3
        z1 = x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2
        z2 = x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1
        z3 = x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1
        return QuatElement(A, (z0, z1, z2, z3))

    def __neg__(self):
        return QuatElement(self.algebra, tuple(-c for c in self.coords))

    def conjugate(self):
        x0, x1, x2, x3 = self.coords
        return QuatElement(self.algebra, (x0, -x1, -x2, -x3))

    def __eq__(self, other):
        return isinstance(other, QuatElement) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def key(self):
        return tuple(c.coords for c in self.coords)

    def is_pm_one(self):
        x0, x1, x2, x3 = self.coords
        return x1.is_zero() and x2.is_zero() and x3.is_zero() and (x0 == 1 or x0 == -1)

    def __repr__(self):
        names = ("", "i", "j", "k")
        parts = ["(%s)%s" % (c, n) for c, n in zip(self.coords, names) if not c.is_zero()]
        return "Quat(%s)" % (" + ".join(parts) or "0")

    def to_json(self):
        return [[str(x) for x in c.coords] for c in self.coords]


def reduced_norm(alpha):
    A = alpha.algebra
    x0, x1, x2, x3 = alpha.coords
    return x0 * x0 - A.a * x1 * x1 - A.b * x2 * x2 + A.a * A.b * x3 * x3


def reduced_trace(alpha):
    return alpha.coords[0] * 2


def rho_embed(A, alpha, prec=ivl.DEFAULT_PREC):
    """Interval matrices rho_i(alpha) at the split places.

    At a place where sigma(a) > 0, i acts diagonally by +-sqrt(sigma(a)) and
    j = [[0, 1], [sigma(b), 0]]; where sigma(a) < 0 the roles of i and j
    are exchanged.
    """
    if reduced_norm(alpha) != 1:
        raise NotNormOne("reduced norm is %s" % reduced_norm(alpha))
    out = []
    for s in A.split_places:
        with ivl.precision(prec + 16):
            a0, a1, a2, a3 = (c.enclose(prec, s) for c in alpha.coords)
            sa, sb = A.a.enclose(prec, s), A.b.enclose(prec, s)
            if A.a.sign(s) > 0:
                r = iv.sqrt(sa)
                m = (a0 + a1 * r, a2 + a3 * r, sb * (a2 - a3 * r), a0 - a1 * r)
            else:
                r = iv.sqrt(sb)
                m = (a0 + a2 * r, a1 - a3 * r, sa * (a1 + a3 * r), a0 - a2 * r)
            g = Isometry(*m, 0)
            tr = reduced_trace(alpha).enclose(prec, s)
            det = g.det()
        if not (ivl.contains_zero(det - 1) and ivl.contains_zero(g.trace() - tr)):
            raise ArithmeticError("embedding check failed at place %d" % s)
        out.append(g)
    return tuple(out)


def enumerate_norm_one(A, coeff_bound):
    """All alpha in the order with power-basis coefficients in
    [-coeff_bound, coeff_bound] and reduced norm 1, sorted by coordinates.

    alpha_0 is found by looking up 1 + a x1^2 + b x2^2 - ab x3^2 in a table
    of squares of the box.
    """
    K = A.base
    B = int(coeff_bound)
    if B < 0:
        raise ValidationError("coeff_bound must be >= 0")
    box = [K(c) for c in product(range(-B, B + 1), repeat=K.degree)]
    squares = {}
    for x in box:
        squares.setdefault((x * x).coords, []).append(x)
    ab = A.a * A.b
    ta = [(x, (A.a * x * x).coords) for x in box]
    tb = [(x, (A.b * x * x).coords) for x in box]
    tc = [(x, (ab * x * x).coords) for x in box]
    one = K.one().coords
    out = []
    for x1, c1 in ta:
        s1 = tuple(u + v for u, v in zip(one, c1))
        for x2, c2 in tb:
            s2 = tuple(u + v for u, v in zip(s1, c2))
            for x3, c3 in tc:
                target = tuple(u - v for u, v in zip(s2, c3))
                roots = squares.get(target)
                if roots:
                    for x0 in roots:
                        out.append(QuatElement(A, (x0, x1, x2, x3)))
    out.sort(key=lambda q: q.key())
    return out


@dataclass(frozen=True)
class Ideal:
    """Principal ideal (generator) of O_K; rational primes included."""

    generator: AlgebraicNumber

    @property
    def norm(self):
        return abs(self.generator.norm())

    def contains(self, x):
        if x.is_zero():
            return True
        return is_algebraic_integer(x / self.generator)

    def __str__(self):
        return "(%s)" % self.generator


def make_ideal(K, spec):
    """Ideal from an integer, a field element, or a coordinate list."""
    if isinstance(spec, Ideal):
        return spec
    if isinstance(spec, (int, Fraction)) and not isinstance(spec, bool):
        g = K(spec)
    elif isinstance(spec, AlgebraicNumber):
        g = as_number(spec, K)
    elif isinstance(spec, (list, tuple)) and len(spec) == K.degree:
        g = K(spec)
    else:
        raise UnsupportedIdeal("only principal ideals are supported, got %r" % (spec,))
    if g.is_zero() or not is_algebraic_integer(g):
        raise UnsupportedIdeal("ideal generator must be a nonzero algebraic integer")
    return Ideal(g)


def congruence_filter(elements, I):
    """Elements with alpha_0 - 1, alpha_1, alpha_2, alpha_3 all in I."""
    if not elements:
        return []
    K = elements[0].algebra.base
    I = make_ideal(K, I)
    out = []
    for q in elements:
        x0, x1, x2, x3 = q.coords
        if I.contains(x0 - 1) and I.contains(x1) and I.contains(x2) and I.contains(x3):
            out.append(q)
    return out


# the systole experiment

def _split_traces(A, t):
    return [(s, t) for s in A.split_places]


def _abs_gt2(t, s):
    """+1 if |sigma_s(t)| > 2, -1 if < 2, 0 if equal (exact)."""
    return (t * t - 4).sign(s)


def displacement(A, alpha, tol=mpmath.mpf(10) ** -30):
    """Displacement of rho(alpha) in H^r (elliptic factors contribute 0).

    Returns None for elliptic alpha; raises on a parabolic factor.
    """
    t = reduced_trace(alpha)
    hyper = []
    for s in A.split_places:
        c = _abs_gt2(t, s)
        if c == 0:
            return "parabolic"
        if c > 0:
            hyper.append(s)
    if not hyper:
        return None

    def f(prec):
        acc = iv.mpf(0)
        for s in hyper:
            x = ivl.iabs(t.enclose(prec, s)) / 2
            acc = acc + ivl.acosh(x) ** 2
        return 2 * iv.sqrt(acc)
    return ivl.refine(f, tol)


def length_bound(A, N):
    """(4/sqrt r) log N - 4 d log 2 / sqrt r, as an interval."""
    with ivl.precision(160):
        r = iv.sqrt(iv.mpf(A.r))
        return (4 * iv.log(iv.mpf(N)) - 4 * A.d * iv.log(iv.mpf(2))) / r


@dataclass
class ExperimentReport:
    algebra: QuatAlgebra
    ideal: Ideal
    N_I: int
    gate: dict
    enumerated: int
    samples: int
    hyperbolic: int
    elliptic: int
    parabolic_skipped: int
    min_length: object
    min_element: object
    bound: object
    slope: float
    violations: list = field(default_factory=list)

    def to_json(self):
        return {
            "N_I": self.N_I,
            "gate": self.gate,
            "enumerated": self.enumerated,
            "samples": self.samples,
            "hyperbolic": self.hyperbolic,
            "elliptic": self.elliptic,
            "parabolic_skipped": self.parabolic_skipped,
            "min_length": None if self.min_length is None else _fmt(self.min_length),
            "min_element": None if self.min_element is None else self.min_element.to_json(),
            "bound": _fmt(self.bound),
            "slope": self.slope,
            "violations": self.violations,
        }


def _fmt(x, digits=20):
    with mpmath.workprec(256):
        return mpmath.nstr((ivl.lo(x) + ivl.hi(x)) / 2, digits, strip_zeros=False)


def _certainly_ge(x, y, tol=mpmath.mpf(10) ** -60):
    """Decide x >= y for intervals, refining x via a callable if needed."""
    if ivl.lo(x) >= ivl.hi(y):
        return True
    if ivl.hi(x) < ivl.lo(y):
        return False
    return None


def systole_experiment(A, I, coeff_bound, elements=None):
    """Check the trace congruence, length bound and elliptic bound on
    the norm-one elements of the coefficient box.

    ``elements`` may carry a precomputed enumeration of the box.
    """
    K = A.base
    I = make_ideal(K, I)
    N = int(I.norm)
    d, r = A.d, A.r
    if r == 0:
        raise ValidationError("algebra ramified at every real place")
    if elements is None:
        elements = enumerate_norm_one(A, coeff_bound)
    violations = []

    def flag(check, q, detail=""):
        violations.append({"check": check, "element": q.to_json(), "detail": detail})

    # checks on the whole box: ramified-place trace bound and the elliptic bound
    for q in elements:
        t = reduced_trace(q)
        for s in A.ramified_real:
            if (t * t - 4).sign(s) > 0:
                flag("ramified_trace", q, "place %d" % s)
        if q.is_pm_one():
            continue
        if all(_abs_gt2(t, s) < 0 for s in A.split_places):
            if not abs((t - 2).norm()) < 4 ** d:
                flag("elliptic", q)

    filtered = [q for q in congruence_filter(elements, I) if not q.is_pm_one()]
    if not filtered:
        raise EmptySample("no nontrivial element of level %s within the box" % I)
    bound = length_bound(A, N)
    hyper = ell = para = 0
    best, best_q = None, None
    for q in filtered:
        t = reduced_trace(q)
        nt = abs((t - 2).norm())
        if t != 2 and nt < N * N:
            flag("trace_congruence", q, "N(tr-2) = %s" % nt)
        rho_embed(A, q)
        disp = displacement(A, q)
        if disp == "parabolic":
            para += 1
            continue
        if disp is None:
            ell += 1
            if N >= 2 ** d:
                flag("torsion", q, "elliptic element above the gate")
            if not nt < 4 ** d:
                flag("elliptic", q)
            continue
        hyper += 1
        ok = _certainly_ge(disp, bound)
        if ok is None:
            disp = displacement(A, q, mpmath.mpf(10) ** -200)
            ok = _certainly_ge(disp, bound)
        if not ok:
            flag("bound", q, "length %s" % _fmt(disp))
        if best is None or ivl.hi(disp) < ivl.lo(best):
            best, best_q = disp, q
    gate = {"norm": {"rule": "N(I) >= 2^d", "value": 2 ** d, "passed": N >= 2 ** d},
            "torsion": {"rule": "N(I) > 8^d", "value": 8 ** d, "passed": N > 8 ** d}}
    return ExperimentReport(A, I, N, gate, len(elements), len(filtered), hyper, ell, para,
                            best, best_q, bound, 4 / sqrt(r), violations)


def slope_table(A, ideals, coeff_bound):
    """Rows converting the log N(I) slope to a log-area slope.

    The index of a level-P subgroup grows like N^3, so 4/sqrt(r) per log N
    becomes 4/(3 sqrt(r)) per log area; the modular-embedding target for
    surfaces is 4/(3r).
    """
    elements = enumerate_norm_one(A, coeff_bound)
    rows = []
    slopes = {"slope_norm": 4 / sqrt(A.r), "slope_area": 4 / (3 * sqrt(A.r)),
              "target_surface": 4 / (3 * A.r)}
    for I in ideals:
        I = make_ideal(A.base, I)
        N = int(I.norm)
        row = {"ideal": str(I), "N_I": N, "gated": int(N < 2 ** A.d)}
        try:
            rep = systole_experiment(A, I, coeff_bound, elements)
        except EmptySample:
            row.update(samples=0, min_length="", bound=_fmt(length_bound(A, N)), violations=0,
                       status="empty", **slopes)
            rows.append(row)
            continue
        row.update(samples=rep.samples,
                   min_length="" if rep.min_length is None else _fmt(rep.min_length),
                   bound=_fmt(rep.bound), violations=len(rep.violations),
                   status="violations" if rep.violations else "ok", **slopes)
        rows.append(row)
    return rows
