"""Hyperbolic plane geometry with exact or certified entries.

Isometries of the upper half-plane are 2x2 real matrices together with a
parity bit: parity 0 acts by z -> (az+b)/(cz+d), parity 1 by
z -> (a conj(z) + b)/(c conj(z) + d).  Reflections have determinant -1,
so det = (-1)^parity and matrices compose by plain multiplication.
Everything is up to an overall sign.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import mpmath
from mpmath import iv

from . import intervals as ivl
from .errors import (
    AllElliptic,
    CoincidentPoints,
    IdentityElement,
    NonPositiveInput,
    NonPositiveUnit,
    NotHyperbolic,
    ParabolicFactor,
    PlacementFailure,
)
from .numfield import AlgebraicNumber, as_number
from .tower import RadicalTower, TowerElement


def _key(x):
    if isinstance(x, (int, Fraction)):
        return ((Fraction(x),),)
    if isinstance(x, AlgebraicNumber):
        if x.is_rational():
            return ((x.coords[0],),)
        return (x.coords,)
    if isinstance(x, TowerElement):
        if x.in_base() and x.comps[0].is_rational():
            return ((x.comps[0].coords[0],),)
        return x.key()
    return None


def _is_exact(x):
    return isinstance(x, (int, Fraction, AlgebraicNumber, TowerElement))


@dataclass(frozen=True, eq=False)
class Isometry:
    """Isometry given by a 2x2 matrix (a b; c d) and an orientation bit."""

    a: object
    b: object
    c: object
    d: object
    parity: int = 0

    @classmethod
    def from_rows(cls, rows, parity=0):
        (a, b), (c, d) = rows
        return cls(a, b, c, d, parity)

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def rows(self):
        return ((self.a, self.b), (self.c, self.d))

    def __mul__(self, other):
        if not isinstance(other, Isometry):
            return NotImplemented
        return Isometry(self.a * other.a + self.b * other.c,
                        self.a * other.b + self.b * other.d,
                        self.c * other.a + self.d * other.c,
                        self.c * other.b + self.d * other.d,
                        self.parity ^ other.parity)

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = identity_like(self)
        for _ in range(n):
            out = out * self
        return out

    def inverse(self):
        # adjugate = det * M^{-1} = +-M^{-1}, the same isometry
        return Isometry(self.d, -self.b, -self.c, self.a, self.parity)

    def det(self):
        return self.a * self.d - self.b * self.c

    def trace(self):
        return self.a + self.d

    def is_exact(self):
        return all(_is_exact(x) for x in self.entries())

    def key(self):
        """Canonical exact key of the +-class, or None for interval entries."""
        ks = [_key(x) for x in self.entries()]
        if any(k is None for k in ks):
            return None
        neg = [_key(-x) for x in self.entries()]
        return (self.parity, min(tuple(ks), tuple(neg)))

    def __eq__(self, other):
        if not isinstance(other, Isometry):
            return NotImplemented
        k1, k2 = self.key(), other.key()
        if k1 is None or k2 is None:
            return NotImplemented
        return k1 == k2

    def __hash__(self):
        return hash(self.key())

    def is_identity(self):
        if self.parity:
            return False
        if self.is_exact():
            return (_is_zero(self.b) and _is_zero(self.c) and _is_zero(self.a - self.d)
                    and not _is_zero(self.a))
        raise ValueError("identity test needs exact entries; use residual()")

    def residual(self, prec=ivl.DEFAULT_PREC):
        """Interval bound on the distance of +-M from the identity."""
        es = [ivl.enclose(x, prec) for x in self.entries()]
        with ivl.precision(prec):
            best = None
            for s in (1, -1):
                r = [ivl.iabs(es[0] - s), ivl.iabs(es[1]), ivl.iabs(es[2]), ivl.iabs(es[3] - s)]
                m = max(ivl.hi(x) for x in r)
                best = m if best is None else min(best, m)
        return best

    def enclose(self, prec=ivl.DEFAULT_PREC):
        return Isometry(*(ivl.enclose(x, prec) for x in self.entries()), parity=self.parity)

    def act(self, z, prec=ivl.DEFAULT_PREC):
        """Image of a complex point (mpmath mpc) at working precision."""
        with mpmath.workprec(prec):
            es = [mpmath.mpf(ivl.enclose(x, prec).mid) for x in self.entries()]
            w = mpmath.conj(z) if self.parity else z
            return (es[0] * w + es[1]) / (es[2] * w + es[3])

    def to_json(self):
        def enc(x):
            if isinstance(x, (int, Fraction)):
                return str(Fraction(x))
            if isinstance(x, AlgebraicNumber):
                return [str(c) for c in x.coords]
            if isinstance(x, TowerElement):
                return [[str(c) for c in comp.coords] for comp in x.comps]
            return [str(ivl.lo(x)), str(ivl.hi(x))]
        field = None
        for x in self.entries():
            if isinstance(x, AlgebraicNumber):
                field = x.field.to_json()
            elif isinstance(x, TowerElement):
                field = {"base": x.tower.base.to_json(),
                         "radicals": [[str(c) for c in r.coords] for r in x.tower.radicals]}
        return {"m": [[enc(self.a), enc(self.b)], [enc(self.c), enc(self.d)]],
                "parity": self.parity, "field": field}

    def __repr__(self):
        return "Isometry([[%s, %s], [%s, %s]]%s)" % (
            self.a, self.b, self.c, self.d, ", parity=1" if self.parity else "")


def _is_zero(x):
    if isinstance(x, (int, Fraction)):
        return x == 0
    return x.is_zero()


def identity_like(g):
    one = g.a * 0 + 1
    zero = g.a * 0
    return Isometry(one, zero, zero, one, 0)


def identity():
    return Isometry(1, 0, 0, 1, 0)


def abs_trace(g):
    """Tr g = |tr g| as an exact scalar (or interval for interval entries)."""
    t = g.trace()
    if ivl.is_interval(t):
        return ivl.iabs(t)
    return -t if ivl.sign(t) < 0 else t


class Kind(Enum):
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


def classify(g):
    """Elliptic / parabolic / hyperbolic by comparing Tr with 2."""
    if g.parity:
        raise ValueError("classify needs an orientation-preserving isometry")
    if g.is_exact():
        if g.is_identity():
            raise IdentityElement("identity has no type")
        disc = g.trace() * g.trace() - 4
        s = ivl.sign(disc)
    else:
        with ivl.precision(ivl.DEFAULT_PREC):
            s = ivl.sign(g.trace() * g.trace() - 4)
        if s is None:
            raise ArithmeticError("trace too close to 2 to classify from intervals")
    if s < 0:
        return Kind.ELLIPTIC
    if s == 0:
        return Kind.PARABOLIC
    return Kind.HYPERBOLIC


def length_from_trace(tr, tol=mpmath.mpf(10) ** -30):
    """2 arccosh(Tr/2) for an exact trace or interval, to absolute width ``tol``."""
    if not ivl.is_interval(tr):
        if ivl.sign(tr * tr - 4) <= 0:
            raise NotHyperbolic("|trace| <= 2")

        def f(prec):
            t = ivl.iabs(ivl.enclose(tr, prec))
            return 2 * ivl.acosh(t / 2)
        return ivl.refine(f, tol)
    t = ivl.iabs(tr)
    if ivl.lo(t) <= 2:
        raise NotHyperbolic("trace interval not certainly above 2")
    return 2 * ivl.acosh(t / 2)


def translation_length(g, tol=mpmath.mpf(10) ** -30):
    """Translation length of a hyperbolic isometry (or of a bare trace)."""
    if isinstance(g, Isometry):
        if g.parity:
            raise NotHyperbolic("orientation-reversing")
        if g.is_exact():
            if g.is_identity() or classify(g) is not Kind.HYPERBOLIC:
                raise NotHyperbolic("not hyperbolic")
        return length_from_trace(g.trace(), tol)
    return length_from_trace(g, tol)


# points and half-turns

def _as_point(p, prec):
    x, y = p
    return ivl.enclose(x, prec), ivl.enclose(y, prec)


def halfturn(p):
    """Order-two rotation about the point p = (x, y), y > 0."""
    x, y = p
    return Isometry(x / y, -(x * x + y * y) / y, Fraction(1) / y if isinstance(y, (int, Fraction))
                    else 1 / y, -x / y)


def halfturn_product_trace(p1, p2, tol=mpmath.mpf(10) ** -30):
    """|tr(AB)| for half-turns A, B about p1, p2; equals 2 cosh d(p1, p2)."""
    exact = all(isinstance(c, (int, Fraction)) for c in (*p1, *p2))
    if exact:
        if tuple(map(Fraction, p1)) == tuple(map(Fraction, p2)):
            raise CoincidentPoints("points coincide")
        p1 = tuple(Fraction(c) for c in p1)
        p2 = tuple(Fraction(c) for c in p2)
        return ivl.enclose(abs_trace(halfturn(p1) * halfturn(p2)), 256)

    def f(prec):
        a = _as_point(p1, prec)
        b = _as_point(p2, prec)
        g = halfturn(a) * halfturn(b)
        return ivl.iabs(g.trace())
    val = ivl.refine(f, tol)
    if ivl.hi(val) <= 2:
        raise CoincidentPoints("points coincide")
    return val


def point_distance_cosh(p1, p2, prec=ivl.DEFAULT_PREC):
    """cosh d(p1, p2) = 1 + |z - w|^2 / (2 Im z Im w) as an interval."""
    with ivl.precision(prec):
        x1, y1 = _as_point(p1, prec)
        x2, y2 = _as_point(p2, prec)
        return 1 + ((x1 - x2) ** 2 + (y1 - y2) ** 2) / (2 * y1 * y2)


# trirectangle and hexagon

@dataclass(frozen=True)
class PolygonSolution:
    """Exact side data of the trirectangle with acute angle pi/3."""

    sinh_a: object
    cosh_a: object
    sinh_b: object
    two_cosh_b: object
    two_cosh_d: object
    tower: RadicalTower

    @property
    def cosh_b(self):
        return self.two_cosh_b / 2

    @property
    def cosh_d(self):
        return self.two_cosh_d / 2

    @property
    def two_cosh_a(self):
        return self.cosh_a * 2

    def length(self, name, tol=mpmath.mpf(10) ** -30):
        value = {"a": self.cosh_a, "b": self.cosh_b, "d": self.cosh_d}[name]
        return ivl.refine(lambda prec: ivl.acosh(ivl.enclose(value, prec)), tol)

    @property
    def phi(self):
        return iv.pi / 3


def _as_unit(u):
    u = as_number(u)
    if u.sign() <= 0:
        raise NonPositiveUnit("u must be positive under the distinguished embedding")
    return u


def solve_trirectangle(u):
    """Trirectangle with sinh a = u and acute angle pi/3.

    cos(pi/3) = sinh a sinh b forces sinh b = 1/(2u); cosh a, 2 cosh b and
    2 cosh d = cosh a * 2 cosh b live in K[sqrt(u^2+1), sqrt(u^-2+4)].
    """
    u = _as_unit(u)
    A = u * u + 1
    B = u.inverse() * u.inverse() + 4
    tower = RadicalTower(u.field, [A, B])
    s, t = tower.roots
    return PolygonSolution(tower(u), s, tower(u.inverse() / 2), t, s * t, tower)


@dataclass
class ReflectionGroupData:
    """Generators of a reflection-derived group with certified relators."""

    generators: list
    presentation: object
    base_unit: AlgebraicNumber
    solution: PolygonSolution
    reflections: list
    relator_residues: list
    names: list

    def evaluate(self, word):
        """Isometry of a word given as (generator index, +-1) pairs."""
        g = identity_like(self.generators[0])
        for idx, e in word:
            h = self.generators[idx]
            g = g * (h if e > 0 else h.inverse())
        return g

    def to_json(self):
        return {"base_unit": self.base_unit.to_json(),
                "names": list(self.names),
                "generators": [g.to_json() for g in self.generators],
                "relator_residues": list(self.relator_residues)}


def trirectangle_reflections(sol):
    """Reflections in the sides F1F2, F2F3, F3F4, F4F1 (canonical placement).

    F2 = i, F1 = e^a i on the imaginary axis, F3 on the unit circle.  The
    side F3F4 lies on the circle centred at coth b of radius 1/sinh b, and
    F4F1 on the circle |z| = e^a.
    """
    T = sol.tower
    one, zero = T(1), T(0)
    u = sol.sinh_a
    s = sol.cosh_a
    half_t = sol.cosh_b
    inv2u = sol.sinh_b
    sig1 = Isometry(-one, zero, zero, one, 1)
    sig2 = Isometry(zero, one, one, zero, 1)
    sig3 = Isometry(half_t, -inv2u, inv2u, -half_t, 1)
    sig4 = Isometry(zero, s + u, s - u, zero, 1)
    return [sig1, sig2, sig3, sig4]


def _certify(words_and_orders, gens):
    residues = []
    for word in words_and_orders:
        g = identity_like(gens[0])
        for idx, e in word:
            h = gens[idx]
            g = g * (h if e > 0 else h.inverse())
        if not g.is_identity():
            raise PlacementFailure("relator %s does not evaluate to +-1" % (word,))
        residues.append(0)
    return residues


def build_trirectangle_group(u):
    """Rotations S1..S4 about the trirectangle vertices, orders (2,2,2,3)."""
    from .grouptheory import FpGroup
    sol = solve_trirectangle(u)
    s1, s2, s3, s4 = trirectangle_reflections(sol)
    S = [s4 * s1, s1 * s2, s2 * s3, s3 * s4]
    pres = FpGroup.from_strings(["s1", "s2", "s3", "s4"],
                                ["s1^2", "s2^2", "s3^2", "s4^3", "s1 s2 s3 s4"])
    residues = _certify(pres.relators, S)
    # the reflections themselves square to the identity
    for r in (s1, s2, s3, s4):
        if not (r * r).is_identity():
            raise PlacementFailure("reflection does not square to 1")
    checks = [
        (abs_trace(S[3]), 1),
        (abs_trace(S[0] * S[1]), sol.two_cosh_a),
        (abs_trace(S[1] * S[2]), sol.two_cosh_b),
        (abs_trace(S[0] * S[2]), sol.two_cosh_d),
    ]
    for got, want in checks:
        if got != want:
            raise PlacementFailure("trace check failed: %r != %r" % (got, want))
    for j in range(3):
        if S[j].trace() != 0:
            raise PlacementFailure("S%d is not a half-turn" % (j + 1))
    return ReflectionGroupData(S, pres, sol.sinh_a.base_part(), sol,
                               [s1, s2, s3, s4], residues, ["S1", "S2", "S3", "S4"])


def hexagon_reflections(sol):
    s1, s2, s3, s4 = trirectangle_reflections(sol)
    c343 = s4 * s3 * s4
    return [s1, s2, s3 * s1 * s3, c343 * s2 * c343, s4 * (s3 * s1 * s3) * s4, s4 * s2 * s4]


def build_hexagon_group(u):
    """Half-turns C1..C6 about the vertices of the right-angled hexagon.

    With side reflections h1..h6, vertex E_j joins sides j-1 and j and
    C_j = h_{j-1} h_j (indices mod 6).  The side E1E2 lies on h1 and has
    length 2a, so C1 C2 = h6 h2 has trace 2 cosh 2a.
    """
    from .grouptheory import FpGroup
    sol = solve_trirectangle(u)
    h = hexagon_reflections(sol)
    C = [h[(j - 1) % 6] * h[j] for j in range(6)]
    pres = FpGroup.from_strings(["c%d" % i for i in range(1, 7)],
                                ["c%d^2" % i for i in range(1, 7)] + ["c1 c2 c3 c4 c5 c6"])
    residues = _certify(pres.relators, C)
    for r in h:
        if not (r * r).is_identity() or r.parity != 1:
            raise PlacementFailure("side map is not a reflection")
    t = abs_trace(C[0] * C[1])
    uu = sol.sinh_a
    if t != uu * uu * 4 + 2:
        raise PlacementFailure("Tr(C1C2) != 2 + 4u^2")
    for c in C:
        if c.trace() != 0:
            raise PlacementFailure("C_j is not a half-turn")
    return ReflectionGroupData(C, pres, sol.sinh_a.base_part(), sol, h, residues,
                               ["C%d" % i for i in range(1, 7)])


def hexagon_opposite_side(a1, a2, a3, tol=mpmath.mpf(10) ** -30):
    """Side b1 opposite a1 in a right-angled hexagon with alternate sides a1, a2, a3."""
    for a in (a1, a2, a3):
        e = ivl.enclose(a, 64)
        if ivl.hi(e) <= 0 or (not ivl.is_interval(a) and ivl.sign(a) <= 0):
            raise NonPositiveInput("side lengths must be positive")

    def f(prec):
        x1, x2, x3 = (ivl.enclose(a, prec) for a in (a1, a2, a3))
        ch = (ivl.cosh(x1) + ivl.cosh(x2) * ivl.cosh(x3)) / (ivl.sinh(x2) * ivl.sinh(x3))
        return ivl.acosh(ch)
    return ivl.refine(f, tol)


def displacement_product(factors, tol=mpmath.mpf(10) ** -30):
    """Translation length in H^r of (g_1, ..., g_r).

    Factors may be Isometries or bare traces.  Elliptic factors contribute
    nothing; a factor with |tr| = 2 is rejected.
    """
    traces = [f.trace() if isinstance(f, Isometry) else f for f in factors]
    hyper = []
    for tr in traces:
        if ivl.is_interval(tr):
            with ivl.precision(ivl.DEFAULT_PREC):
                s = ivl.sign(tr * tr - 4)
            if s is None:
                raise ParabolicFactor("cannot separate |tr| from 2")
        else:
            s = ivl.sign(tr * tr - 4)
        if s == 0:
            raise ParabolicFactor("factor with |tr| = 2")
        if s > 0:
            hyper.append(tr)
    if not hyper:
        raise AllElliptic("no hyperbolic factor")

    def f(prec):
        acc = iv.mpf(0)
        for tr in hyper:
            t = ivl.iabs(ivl.enclose(tr, prec))
            x = ivl.acosh(t / 2)
            acc = acc + x * x
        return 2 * iv.sqrt(acc)
    if any(ivl.is_interval(tr) for tr in hyper):
        with ivl.precision(ivl.DEFAULT_PREC):
            return f(ivl.DEFAULT_PREC)
    return ivl.refine(f, tol)


def orbifold_area(genus, orders=(), cusps=0):
    """Area / pi of a hyperbolic orbifold of the given signature."""
    chi = Fraction(2 * genus - 2 + cusps) + sum(1 - Fraction(1, m) for m in orders)
    if chi <= 0:
        raise ValueError("signature is not hyperbolic")
    return 2 * chi
