"""Multi-quadratic algebras K[sqrt(r_1), ..., sqrt(r_k)] over a totally real K.

Requested radicands are reduced to a list of independent ones: a new
radicand A is expressed through the existing ones whenever A times a
product of them is a square in K.  An element is stored as one K
coefficient per subset S of independent radicals, standing for
``c_S * prod_{i in S} sqrt(r_i)``.  All square roots are taken positive at
the distinguished embedding of K.
"""

from fractions import Fraction

from . import intervals as ivl
from .errors import NotTotallyPositive
from .numfield import (
    AlgebraicNumber,
    charpoly_of,
    count_real_roots,
    is_totally_positive,
    sqrt_in_field,
    squarefree_part,
)


class RadicalTower:
    """The algebra generated over ``base`` by square roots of ``radicands``.

    ``roots[i]`` is the positive square root of the i-th requested radicand
    as a :class:`TowerElement`.
    """

    def __init__(self, base, radicands):
        self.base = base
        self.radicals = []
        specs = []
        for A in radicands:
            A = base(A)
            if A.is_zero() or not is_totally_positive(A):
                raise NotTotallyPositive("radicand %s is not totally positive" % A)
            specs.append(self._express(A))
        k = len(self.radicals)
        self.rank = k
        self.size = 1 << k
        self._prods = [self._product(S) for S in range(self.size)]
        self.roots = []
        for coeff, mask in specs:
            comps = [base.zero()] * self.size
            comps[mask] = coeff
            self.roots.append(TowerElement(self, comps))

    def _product(self, mask):
        out = self.base.one()
        for i, r in enumerate(self.radicals):
            if mask >> i & 1:
                out = out * r
        return out

    def _express(self, A):
        """Return (c, S) with sqrt(A) = c * sqrt(r_S), adding A if needed."""
        for mask in range(1 << len(self.radicals)):
            P = self._product(mask)
            w = sqrt_in_field(A * P)
            if w is not None:
                return w / P, mask
        self.radicals.append(A)
        return self.base.one(), 1 << (len(self.radicals) - 1)

    def __call__(self, value):
        if isinstance(value, TowerElement):
            if value.tower is not self:
                raise ValueError("element of another tower")
            return value
        comps = [self.base.zero()] * self.size
        comps[0] = self.base(value)
        return TowerElement(self, comps)

    def one(self):
        return self(1)

    @property
    def degree(self):
        """Dimension over Q."""
        return self.size * self.base.degree

    def __repr__(self):
        return "RadicalTower(%r, radicals=%s)" % (self.base, [str(r) for r in self.radicals])


class TowerElement:
    __slots__ = ("tower", "comps", "_charpoly")

    def __init__(self, tower, comps):
        self.tower = tower
        self.comps = tuple(comps)
        self._charpoly = None

    def _coerce(self, other):
        if isinstance(other, TowerElement):
            if other.tower is not self.tower:
                raise ValueError("mixing elements of different towers")
            return other
        if isinstance(other, (int, Fraction, AlgebraicNumber)):
            return self.tower(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return TowerElement(self.tower, [a + b for a, b in zip(self.comps, o.comps)])

    __radd__ = __add__

    def __neg__(self):
        return TowerElement(self.tower, [-a for a in self.comps])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return TowerElement(self.tower, [a - b for a, b in zip(self.comps, o.comps)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TowerElement(self.tower, [a * other for a in self.comps])
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        t = self.tower
        out = [t.base.zero()] * t.size
        for S, a in enumerate(self.comps):
            if a.is_zero():
                continue
            for T, b in enumerate(o.comps):
                if b.is_zero():
                    continue
                out[S ^ T] = out[S ^ T] + a * b * t._prods[S & T]
        return TowerElement(t, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return TowerElement(self.tower, [a / other for a in self.comps])
        if isinstance(other, AlgebraicNumber):
            inv = other.inverse()
            return TowerElement(self.tower, [a * inv for a in self.comps])
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = self.tower.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, TowerElement):
            return other.tower is self.tower and self.comps == other.comps
        if isinstance(other, (int, Fraction, AlgebraicNumber)):
            try:
                return self == self.tower(other)
            except ValueError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash(self.key())

    def key(self):
        return tuple(c.coords for c in self.comps)

    def is_zero(self):
        return all(c.is_zero() for c in self.comps)

    def in_base(self):
        return all(c.is_zero() for c in self.comps[1:])

    def base_part(self):
        return self.comps[0]

    def enclose(self, prec=ivl.DEFAULT_PREC):
        t = self.tower
        with ivl.precision(prec + 16):
            from mpmath import iv
            roots = [iv.sqrt(r.enclose(prec)) for r in t.radicals]
            acc = ivl.from_fraction(0)
            for S, c in enumerate(self.comps):
                if c.is_zero():
                    continue
                term = c.enclose(prec)
                for i, r in enumerate(roots):
                    if S >> i & 1:
                        term = term * r
                acc = acc + term
        return acc

    def sign(self):
        return ivl.sign(self)

    def __float__(self):
        return float(ivl.lo(self.enclose(64)))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def rational_coords(self):
        """Coordinates over Q on the basis beta^i * sqrt(r_S)."""
        return tuple(x for c in self.comps for x in c.coords)

    def charpoly(self):
        """Characteristic polynomial over Q of multiplication by self."""
        if self._charpoly is None:
            t = self.tower
            K = t.base
            cols = []
            for S in range(t.size):
                for i in range(K.degree):
                    comps = [K.zero()] * t.size
                    basis = [0] * K.degree
                    basis[i] = 1
                    comps[S] = K(basis)
                    cols.append((self * TowerElement(t, comps)).rational_coords())
            self._charpoly = charpoly_of(cols)
        return self._charpoly

    def minpoly(self):
        return squarefree_part(self.charpoly())

    def is_totally_real(self):
        m = self.minpoly()
        return count_real_roots(m) == len(m) - 1

    def __repr__(self):
        parts = []
        for S, c in enumerate(self.comps):
            if not c.is_zero():
                parts.append("(%s)*r%s" % (c, S) if S else "(%s)" % c)
        return "TowerElement(%s)" % (" + ".join(parts) or "0")

    def to_json(self):
        return {"tower_radicals": [r.to_json() for r in self.tower.radicals],
                "comps": [[str(x) for x in c.coords] for c in self.comps]}
