"""Exact arithmetic in totally real number fields.

A field is ``Q(beta)`` for a root ``beta`` of a monic irreducible integer
polynomial whose roots are all real.  Elements are rational coordinate
vectors on the power basis ``1, beta, ..., beta^(d-1)``.  Real embeddings
are tracked by isolating rational intervals which are bisected on demand,
so every comparison is exact or certified.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key, lru_cache
from itertools import product
from math import lcm, log, exp, isqrt

import mpmath
import sympy
from mpmath import iv
from sympy.polys.matrices import DomainMatrix

from . import intervals as ivl
from .errors import (
    BadPrime,
    NotAUnit,
    NotIntegral,
    NotIrreducible,
    NotMonic,
    NotTotallyPositive,
    NotTotallyReal,
    UnsupportedIdealFactorization,
    ValidationError,
)
from .linalg import solve_combination

_X = sympy.Symbol("x")


def _poly(coeffs, domain=sympy.QQ):
    """sympy Poly from low-degree-first coefficients."""
    return sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator)
                                     if isinstance(c, Fraction) else c
                                     for c in coeffs])), _X, domain=domain)


def _coeffs(poly):
    """Low-degree-first Fractions of a sympy Poly."""
    return tuple(Fraction(int(c.p), int(c.q)) if hasattr(c, "p") else Fraction(c)
                 for c in reversed(poly.all_coeffs()))


def _eval(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def charpoly_of(columns):
    """Characteristic polynomial (low-first Fractions) of a square matrix
    given by its columns."""
    n = len(columns)
    q = sympy.QQ
    rows = [[q(int(Fraction(columns[j][i]).numerator), int(Fraction(columns[j][i]).denominator))
             for j in range(n)] for i in range(n)]
    cp = DomainMatrix(rows, (n, n), q).charpoly()
    return tuple(Fraction(int(c.numerator), int(c.denominator)) for c in reversed(cp))


def squarefree_part(coeffs):
    return _coeffs(_poly(coeffs).sqf_part().monic())


def count_real_roots(coeffs):
    return _poly(coeffs).count_roots()


class NumberField:
    """Totally real field ``Q(beta)``; construct with :func:`make_field`.

    ``index`` selects the distinguished real embedding (roots are sorted
    increasingly).  Elements compare and print through that embedding.
    """

    def __init__(self, minpoly, roots, index):
        self.minpoly = tuple(minpoly)
        self.degree = len(minpoly) - 1
        self.index = index
        self._roots = [list(r) for r in roots]
        d = self.degree
        red = {}
        cur = [Fraction(-c) for c in self.minpoly[:d]]
        for k in range(d, 2 * d - 1):
            red[k] = tuple(cur)
            # multiply cur by beta and reduce once more
            top = cur[-1]
            cur = [Fraction(0)] + cur[:-1]
            cur = [a - top * c for a, c in zip(cur, self.minpoly[:d])]
        self._red = red
        self._disc = None

    def __repr__(self):
        return "NumberField(%s, index=%d)" % (list(self.minpoly), self.index)

    def __eq__(self, other):
        return (isinstance(other, NumberField) and self.minpoly == other.minpoly
                and self.index == other.index)

    def __hash__(self):
        return hash((self.minpoly, self.index))

    def __call__(self, value):
        if isinstance(value, AlgebraicNumber):
            if value.field == self:
                return value
            if value.field.degree == 1:
                return self(value.coords[0])
            raise ValueError("element of %r is not in %r" % (value.field, self))
        if isinstance(value, (int, Fraction)):
            return AlgebraicNumber(self, (Fraction(value),) + (Fraction(0),) * (self.degree - 1))
        coords = tuple(Fraction(c) for c in value)
        if len(coords) != self.degree:
            raise ValueError("expected %d coordinates" % self.degree)
        return AlgebraicNumber(self, coords)

    @property
    def gen(self):
        if self.degree == 1:
            return self(-self.minpoly[0])
        return self([0, 1] + [0] * (self.degree - 2))

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    @property
    def is_rational(self):
        return self.degree == 1

    def discriminant(self):
        if self._disc is None:
            self._disc = int(sympy.discriminant(_poly(self.minpoly, sympy.ZZ)))
        return self._disc

    def _mul(self, a, b):
        d = self.degree
        if d == 1:
            return (a[0] * b[0],)
        prod = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = prod[:d]
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c:
                for i, r in enumerate(self._red[k]):
                    out[i] += c * r
        return tuple(out)

    # embeddings
    def root_interval(self, j, bits):
        """Rational isolating interval of the j-th root, width <= 2^-bits."""
        lo, hi = self._roots[j]
        target = Fraction(1, 1 << bits)
        if hi - lo <= target:
            return lo, hi
        f = self.minpoly
        slo = _eval(f, lo)
        if slo == 0:
            self._roots[j] = [lo, lo]
            return lo, lo
        s_lo = slo > 0
        while hi - lo > target:
            mid = (lo + hi) / 2
            v = _eval(f, mid)
            if v == 0:
                lo = hi = mid
                break
            if (v > 0) == s_lo:
                lo = mid
            else:
                hi = mid
        self._roots[j] = [lo, hi]
        return lo, hi

    def root_enclosure(self, j, prec):
        lo, hi = self.root_interval(j, prec + 4)
        with ivl.precision(prec + 16):
            return ivl.hull(ivl.from_fraction(lo), ivl.from_fraction(hi))

    def embeddings(self, prec=64):
        return [self.root_enclosure(j, prec) for j in range(self.degree)]

    def to_json(self):
        return {"minpoly": list(self.minpoly), "embedding_index": self.index}


@lru_cache(maxsize=None)
def _make_field_cached(minpoly, index):
    p = _poly(minpoly, sympy.ZZ)
    d = len(minpoly) - 1
    if d >= 2 and not p.is_irreducible:
        raise NotIrreducible("%s is reducible over Q" % p.as_expr())
    if p.count_roots() != d:
        raise NotTotallyReal("%s has non-real roots" % p.as_expr())
    roots = []
    for (a, b), _ in p.intervals():
        roots.append((Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q))))
    roots.sort()
    if index is None:
        index = d - 1
    if not 0 <= index < d:
        raise ValidationError("embedding index %d out of range" % index)
    return NumberField(minpoly, roots, index)


def make_field(minpoly, index=None):
    """Totally real field defined by ``minpoly`` (low-degree-first integers).

    The distinguished embedding defaults to the largest root.
    """
    coeffs = list(minpoly)
    if len(coeffs) < 2:
        raise ValidationError("polynomial must have degree at least 1")
    if any(Fraction(c).denominator != 1 for c in coeffs):
        raise ValidationError("coefficients must be integers")
    coeffs = tuple(int(c) for c in coeffs)
    if coeffs[-1] != 1:
        raise NotMonic("leading coefficient is %d" % coeffs[-1])
    return _make_field_cached(coeffs, index)


QQ_FIELD = make_field((0, 1))


def rational(q):
    return QQ_FIELD(Fraction(q))


class AlgebraicNumber:
    """Element of a :class:`NumberField` given by power-basis coordinates."""

    __slots__ = ("field", "coords", "_charpoly")

    def __init__(self, field, coords):
        self.field = field
        self.coords = tuple(coords)
        self._charpoly = None

    # coercion and arithmetic
    def _coerce(self, other):
        if isinstance(other, AlgebraicNumber):
            if other.field == self.field:
                return other
            if other.field.degree == 1:
                return self.field(other.coords[0])
            if self.field.degree == 1:
                return None
            raise ValueError("mixing elements of %r and %r" % (self.field, other.field))
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return None

    def _promote(self, other):
        """Handle a rational self meeting an element of a bigger field."""
        if (self.field.degree == 1 and isinstance(other, AlgebraicNumber)
                and other.field.degree > 1):
            return other.field(self.coords[0])
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            p = self._promote(other)
            return NotImplemented if p is None else p + other
        return AlgebraicNumber(self.field, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicNumber(self.field, tuple(-a for a in self.coords))

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            p = self._promote(other)
            return NotImplemented if p is None else p - other
        return AlgebraicNumber(self.field, tuple(a - b for a, b in zip(self.coords, o.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgebraicNumber(self.field, tuple(a * other for a in self.coords))
        o = self._coerce(other)
        if o is None:
            p = self._promote(other)
            return NotImplemented if p is None else p * other
        return AlgebraicNumber(self.field, self.field._mul(self.coords, o.coords))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError
            return AlgebraicNumber(self.field, tuple(a / other for a in self.coords))
        o = self._coerce(other)
        if o is None:
            p = self._promote(other)
            return NotImplemented if p is None else p / other
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.field.degree == 1:
            return self.field(1 / self.coords[0])
        cols = self.multiplication_columns()
        e0 = [Fraction(1)] + [Fraction(0)] * (self.field.degree - 1)
        return self.field(solve_combination(cols, e0))

    def multiplication_columns(self):
        f = self.field
        cols = []
        basis = [0] * f.degree
        for i in range(f.degree):
            basis[i] = 1
            cols.append(f._mul(self.coords, tuple(Fraction(b) for b in basis)))
            basis[i] = 0
        return cols

    # equality and hashing are exact
    def __eq__(self, other):
        if isinstance(other, AlgebraicNumber):
            if other.field == self.field:
                return self.coords == other.coords
            if other.field.degree == 1 or self.field.degree == 1:
                return self.is_rational() and other.is_rational() and \
                    self.coords[0] == other.coords[0]
            return False
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.coords[0])
        return hash((self.field, self.coords))

    def is_zero(self):
        return not any(self.coords)

    def is_rational(self):
        return not any(self.coords[1:])

    def to_fraction(self):
        if not self.is_rational():
            raise ValueError("not rational")
        return self.coords[0]

    def key(self):
        return self.coords

    # real embeddings
    def enclose(self, prec=ivl.DEFAULT_PREC, embedding=None):
        f = self.field
        j = f.index if embedding is None else embedding
        if self.is_rational():
            with ivl.precision(prec):
                return ivl.from_fraction(self.coords[0])
        b = f.root_enclosure(j, prec)
        with ivl.precision(prec + 16):
            acc = ivl.from_fraction(self.coords[-1])
            for c in reversed(self.coords[:-1]):
                acc = acc * b + ivl.from_fraction(c)
        return acc

    def sign(self, embedding=None):
        if self.is_zero():
            return 0
        prec = 64
        while True:
            e = self.enclose(prec, embedding)
            if ivl.lo(e) > 0:
                return 1
            if ivl.hi(e) < 0:
                return -1
            prec *= 2

    def conjugates(self, prec=ivl.DEFAULT_PREC):
        return [self.enclose(prec, j) for j in range(self.field.degree)]

    def __float__(self):
        return float(ivl.lo(self.enclose(64)))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # invariants
    def charpoly(self):
        if self._charpoly is None:
            if self.field.degree == 1:
                self._charpoly = (-self.coords[0], Fraction(1))
            else:
                self._charpoly = charpoly_of(self.multiplication_columns())
        return self._charpoly

    def minpoly(self):
        return squarefree_part(self.charpoly())

    def norm(self):
        cp = self.charpoly()
        return cp[0] * (-1) ** self.field.degree

    def trace(self):
        return -self.charpoly()[-2]

    def denominator(self):
        return lcm(*(c.denominator for c in self.coords))

    def __repr__(self):
        return "AlgebraicNumber(%s, [%s])" % (
            list(self.field.minpoly), ", ".join(str(c) for c in self.coords))

    def __str__(self):
        if self.is_rational():
            return str(self.coords[0])
        terms = []
        for i, c in enumerate(self.coords):
            if c:
                terms.append(str(c) if i == 0 else "%s*b^%d" % (c, i) if i > 1 else "%s*b" % c)
        return " + ".join(terms) if terms else "0"

    def to_json(self):
        return {"minpoly": list(self.field.minpoly),
                "coords": [str(c) for c in self.coords],
                "embedding_index": self.field.index}

    @staticmethod
    def from_json(obj):
        f = make_field(obj["minpoly"], obj.get("embedding_index"))
        return f([Fraction(c) for c in obj["coords"]])


def as_number(x, field=None):
    """Coerce ints, Fractions and AlgebraicNumbers into a common field."""
    if isinstance(x, AlgebraicNumber):
        return x if field is None else field(x)
    if isinstance(x, (int, Fraction)):
        return (field or QQ_FIELD)(x)
    raise TypeError("not a field element: %r" % (x,))


def _charpoly_any(x):
    if isinstance(x, (int, Fraction)):
        return (-Fraction(x), Fraction(1))
    return x.charpoly()


def is_algebraic_integer(x):
    """True iff the minimal polynomial of ``x`` lies in Z[X].

    The characteristic polynomial is a power of the minimal one, and by
    Gauss's lemma one has integer coefficients iff the other does.
    """
    return all(c.denominator == 1 for c in _charpoly_any(x))


def is_totally_real(x):
    if isinstance(x, (int, Fraction, AlgebraicNumber)):
        return True
    sqf = squarefree_part(_charpoly_any(x))
    return count_real_roots(sqf) == len(sqf) - 1


def is_totally_positive(x):
    """True iff every real embedding of ``x`` is positive."""
    if isinstance(x, (int, Fraction)):
        return x > 0
    if isinstance(x, AlgebraicNumber):
        return all(x.sign(j) > 0 for j in range(x.field.degree))
    # elements of larger algebras: every root of the charpoly must be > 0
    sqf = squarefree_part(_charpoly_any(x))
    p = _poly(sqf)
    return p.count_roots() == p.degree() and p.eval(0) != 0 and \
        p.count_roots(0, None) == p.degree()


# square roots

def _rational_sqrt(q):
    q = Fraction(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def sqrt_in_field(alpha):
    """Square root of ``alpha`` inside its own field, positive at the
    distinguished embedding, or None when ``alpha`` is not a square there."""
    K = alpha.field
    if alpha.is_zero():
        return K.zero()
    if K.degree == 1:
        r = _rational_sqrt(alpha.coords[0])
        return None if r is None else K(r)
    if not all(alpha.sign(j) > 0 for j in range(K.degree)):
        return None
    if _rational_sqrt(abs(alpha.norm())) is None:
        return None
    m = alpha.denominator()
    a = alpha * (m * m)
    # an integral square root has coordinates in (1/disc) Z
    D = abs(K.discriminant())
    d = K.degree
    size = max(abs(c) for c in a.coords)
    dps = 30 + 2 * len(str(size)) + len(str(D))
    with mpmath.workdps(dps):
        roots = [mpmath.mpf(ivl.lo(K.root_enclosure(j, int(dps * 3.33) + 8)))
                 for j in range(d)]
        vals = [mpmath.sqrt(abs(mpmath.mpf(ivl.lo(a.enclose(int(dps * 3.33) + 8, j)))))
                for j in range(d)]
        V = mpmath.matrix([[r ** i for i in range(d)] for r in roots])
        others = [j for j in range(d) if j != K.index]
        for signs in product((1, -1), repeat=len(others)):
            s = [1] * d
            for j, sg in zip(others, signs):
                s[j] = sg
            rhs = mpmath.matrix([s[j] * vals[j] for j in range(d)])
            try:
                sol = mpmath.lu_solve(V, rhs)
            except ZeroDivisionError:
                continue
            cand = []
            for i in range(d):
                x = sol[i] * D
                n = int(mpmath.nint(x))
                if abs(x - n) > mpmath.mpf(10) ** (-dps // 3):
                    break
                cand.append(Fraction(n, D))
            else:
                w = K(cand)
                if w * w == a:
                    return w / m
    return None


def sqrt_totally_positive(alpha):
    """Square root of a totally positive algebraic integer.

    Returns an element of the same field when possible.  Otherwise the root
    is returned as the generator of the field cut out by the irreducible
    factor of P(X^2) (P the minimal polynomial of ``alpha``) vanishing at the
    positive square root of the distinguished image.
    """
    alpha = as_number(alpha)
    if not is_algebraic_integer(alpha):
        raise NotIntegral("%s is not an algebraic integer" % alpha)
    if alpha.is_zero() or not is_totally_positive(alpha):
        raise NotTotallyPositive("%s is not totally positive" % alpha)
    w = sqrt_in_field(alpha)
    if w is not None:
        return w
    P = alpha.minpoly()
    PX2 = [Fraction(0)] * (2 * len(P) - 1)
    for i, c in enumerate(P):
        PX2[2 * i] = c
    _, factors = _poly(PX2, sympy.QQ).factor_list()
    with ivl.precision(200):
        target = iv.sqrt(alpha.enclose(200))
    for g, _ in factors:
        g = g.monic()
        coeffs = [int(c) for c in reversed(g.all_coeffs())]
        L = make_field(coeffs)
        for j in range(L.degree):
            lo_, hi_ = L.root_interval(j, 190)
            if lo_ > 0 and ivl.mpf_to_fraction(ivl.lo(target)) <= hi_ \
                    and lo_ <= ivl.mpf_to_fraction(ivl.hi(target)):
                return make_field(coeffs, j).gen
    raise ArithmeticError("no factor of P(X^2) vanishes at the square root")


# prime ideals and valuations

@dataclass(frozen=True)
class PrimeIdealData:
    """Prime ideal (p, g(beta)) of a monogenic order with p prime to the index."""

    rational_prime: int
    residue_degree: int
    norm: int
    local_generator: tuple
    ramification: int
    field: NumberField

    def to_json(self):
        return {"p": self.rational_prime, "f": self.residue_degree, "norm": self.norm,
                "local_generator": list(self.local_generator), "e": self.ramification}


def _mod_poly(coeffs, p):
    return sympy.Poly(list(reversed([int(c) % p for c in coeffs])), _X, modulus=p)


def _poly_mod_coeffs(poly, p):
    return tuple(int(c) % p for c in reversed(poly.all_coeffs()))


@lru_cache(maxsize=None)
def _primes_above(field, p):
    f = field.minpoly
    fbar = _mod_poly(f, p)
    _, facs = fbar.factor_list()
    facs = sorted(((_poly_mod_coeffs(g, p), e) for g, e in facs))
    # Dedekind criterion: p divides the index iff some repeated factor
    # also divides (f - prod g_i^e_i)/p modulo p.
    prod_ = sympy.Poly(1, _X, domain=sympy.ZZ)
    for g, e in facs:
        prod_ = prod_ * sympy.Poly(list(reversed(g)), _X, domain=sympy.ZZ) ** e
    diff = sympy.Poly(list(reversed(f)), _X, domain=sympy.ZZ) - prod_
    F = [int(c) // p for c in reversed(diff.all_coeffs())] if not diff.is_zero else [0]
    Fbar = _mod_poly(F, p)
    for g, e in facs:
        if e >= 2 and (Fbar.is_zero or Fbar.rem(_mod_poly(g, p)).is_zero):
            raise BadPrime("%d divides the index of Z[beta] in the maximal order" % p)
    out = []
    for g, e in facs:
        out.append(PrimeIdealData(p, len(g) - 1, p ** (len(g) - 1), g, e, field))
    return tuple(out)


def prime_ideal_above(field, p):
    """Prime ideals above ``p`` from the factorization of the minpoly mod p."""
    if not sympy.isprime(p):
        raise ValidationError("%s is not prime" % p)
    return list(_primes_above(field, int(p)))


@lru_cache(maxsize=None)
def _uniformizer_helper(P):
    field, p = P.field, P.rational_prime
    h = _mod_poly(field.minpoly, p).quo(_mod_poly(P.local_generator, p))
    coeffs = list(_poly_mod_coeffs(h, p)) + [0] * field.degree
    return tuple(coeffs[:field.degree])


def _vp(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(alpha, P):
    """ord_P(alpha) for nonzero ``alpha``."""
    alpha = as_number(alpha, P.field)
    if alpha.is_zero():
        raise ValueError("valuation of zero")
    p = P.rational_prime
    m = alpha.denominator()
    x = [int(c * m) for c in alpha.coords]
    if P.field.degree == 1:
        return _vp(x[0], p) - _vp(m, p)
    h = tuple(Fraction(c) for c in _uniformizer_helper(P))
    v = 0
    K = P.field
    while True:
        y = K._mul(tuple(Fraction(c) for c in x), h)
        if all(int(c) % p == 0 for c in y):
            x = [int(c) // p for c in y]
            v += 1
        else:
            break
    return v - P.ramification * _vp(m, p)


def finite_places(alpha):
    """All (P, ord_P(alpha)) with nonzero order."""
    alpha = as_number(alpha)
    K = alpha.field
    m = alpha.denominator()
    n = alpha.norm() * Fraction(m) ** K.degree
    primes = set(sympy.primefactors(m)) | set(sympy.primefactors(int(n.numerator)))
    out = []
    for p in sorted(primes):
        for P in prime_ideal_above(K, p):
            v = valuation(alpha, P)
            if v:
                out.append((P, v))
    return out


# heights

@dataclass(frozen=True)
class Height:
    """Certified enclosure of an absolute multiplicative height."""

    value: object
    log_value: object

    @property
    def lower(self):
        return ivl.lo(self.value)

    @property
    def upper(self):
        return ivl.hi(self.value)

    def certainly_ge(self, x):
        return self.lower >= x

    def __repr__(self):
        return "Height(%s)" % mpmath.nstr(mpmath.mpf(self.value.mid), 15)


def _finite_factor(entries, K):
    """prod over finite places of max(1, max_e v_P(e)) as an exact integer."""
    m = lcm(*(e.denominator() for e in entries if not e.is_zero()))
    total = 1
    for p in sympy.primefactors(m):
        try:
            Ps = prime_ideal_above(K, p)
        except BadPrime as exc:
            raise UnsupportedIdealFactorization(str(exc)) from None
        for P in Ps:
            lowest = min(valuation(e, P) for e in entries if not e.is_zero())
            if lowest < 0:
                total *= P.norm ** (-lowest)
    return total


def _height_of_entries(entries, rel_width):
    K = None
    for e in entries:
        if isinstance(e, AlgebraicNumber) and e.field.degree > 1:
            K = e.field
            break
    K = K or QQ_FIELD
    entries = [as_number(e, K) for e in entries]
    if all(e.is_zero() for e in entries):
        raise ValueError("height of zero")
    fin = _finite_factor(entries, K)
    d = K.degree

    def compute(prec):
        acc = ivl.from_fraction(fin)
        for j in range(d):
            best = iv.mpf(1)
            for e in entries:
                if not e.is_zero():
                    a = ivl.iabs(e.enclose(prec, j))
                    best = iv.mpf([max(ivl.lo(best), ivl.lo(a)), max(ivl.hi(best), ivl.hi(a))])
            acc = acc * best
        return iv.log(acc) / d

    logv = ivl.refine(compute, rel_width / 4, start=64)
    with ivl.precision(max(iv.prec, 128)):
        val = iv.exp(logv)
    return Height(val, logv)


def height_number(alpha, rel_width=2.0 ** -30):
    """Absolute height of a nonzero element, normalized by 1/[L:Q]."""
    alpha = as_number(alpha)
    if alpha.is_zero():
        raise ValueError("height of zero")
    return _height_of_entries([alpha], rel_width)


def height_matrix(gamma, rel_width=2.0 ** -30):
    """Height of a 2x2 matrix: places take the max over the four entries."""
    entries = _matrix_entries(gamma)
    return _height_of_entries(entries, rel_width)


def _matrix_entries(gamma):
    if hasattr(gamma, "entries"):
        return list(gamma.entries())
    (a, b), (c, d) = gamma
    return [a, b, c, d]


def product_formula(alpha):
    """Exact value of prod_v v(alpha) over all places (always 1)."""
    alpha = as_number(alpha)
    total = abs(alpha.norm())
    for P, v in finite_places(alpha):
        total *= Fraction(P.norm) ** (-v)
    return total


# units

def _check_unit(u):
    if u.is_zero() or not is_algebraic_integer(u) or not is_algebraic_integer(u.inverse()):
        raise NotAUnit("%s is not a unit" % u)


def unit_sweep(field, fundamental_units, interval, budget):
    """Units +-prod u_i^e_i with |e_i| <= budget whose distinguished image
    lies in the closed ``interval``; sorted increasingly."""
    units = [field(u) for u in fundamental_units]
    for u in units:
        _check_unit(u)
    lo, hi = (Fraction(x) for x in interval)
    if lo > hi:
        raise ValidationError("empty interval")
    logs = [log(abs(float(u))) for u in units]
    sgn = [u.sign() for u in units]
    powers = []
    for u in units:
        table = {0: field.one()}
        for e in range(1, budget + 1):
            table[e] = table[e - 1] * u
        inv = u.inverse()
        for e in range(1, budget + 1):
            table[-e] = table[-e + 1] * inv
        powers.append(table)
    slack = 1e-9
    found = {}
    for exps in product(range(-budget, budget + 1), repeat=len(units)):
        mag = exp(sum(e * l for e, l in zip(exps, logs))) if units else 1.0
        base_sign = 1
        for e, s in zip(exps, sgn):
            if e % 2 and s < 0:
                base_sign = -base_sign
        for outer in (1, -1):
            s = base_sign * outer
            v = s * mag
            if v < float(lo) - slack * (1 + abs(v)) or v > float(hi) + slack * (1 + abs(v)):
                continue
            x = field.one()
            for e, table in zip(exps, powers):
                x = x * table[e]
            x = x * outer
            if (x - lo).sign() >= 0 and (x - hi).sign() <= 0:
                found[x.coords] = x
    return sorted(found.values(), key=cmp_to_key(lambda a, b: (a - b).sign()))
