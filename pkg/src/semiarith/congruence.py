"""Reduction of 2x2 matrix groups modulo prime ideals and congruence data.

Matrices are 4-tuples (a, b, c, d) of exact scalars (int, Fraction or
AlgebraicNumber) or anything with an ``entries()`` method.  The residue
field O_K/P is F_p[x]/(g) where g is the factor of the minimal polynomial
cut out by P, which is valid because prime ideal data is only produced for
primes not dividing the index of Z[beta].
"""

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import log

import mpmath

from . import intervals as ivl
from .errors import CapExceeded, NoKernelElementFound, NotPIntegral, ValidationError
from .hypgeom import length_from_trace
from .numfield import (
    AlgebraicNumber,
    QQ_FIELD,
    PrimeIdealData,
    height_matrix,
    height_number,
    prime_ideal_above,
    valuation,
)

DEFAULT_CAP = 64


class FiniteField:
    """F_q = F_p[x]/(g), elements encoded as integers sum a_i p^i."""

    def __init__(self, p, modulus):
        self.p = p
        self.modulus = tuple(int(c) % p for c in modulus)
        self.f = len(self.modulus) - 1
        self.q = p ** self.f
        q = self.q
        if q <= 4096:
            self._mul = [[self._slow_mul(a, b) for b in range(q)] for a in range(q)]
            self._add = [[self._slow_add(a, b) for b in range(q)] for a in range(q)]
        else:
            self._mul = self._add = None
        self._neg = [self._encode([-c for c in self._digits(a)]) for a in range(q)]

    def _digits(self, n):
        out = []
        for _ in range(self.f):
            n, r = divmod(n, self.p)
            out.append(r)
        return out

    def _encode(self, digits):
        n = 0
        for c in reversed(digits):
            n = n * self.p + c % self.p
        return n

    def _slow_add(self, a, b):
        return self._encode([x + y for x, y in zip(self._digits(a), self._digits(b))])

    def _slow_mul(self, a, b):
        p, g, f = self.p, self.modulus, self.f
        x, y = self._digits(a), self._digits(b)
        prod = [0] * (2 * f - 1)
        for i, u in enumerate(x):
            if u:
                for j, v in enumerate(y):
                    prod[i + j] = (prod[i + j] + u * v) % p
        for k in range(len(prod) - 1, f - 1, -1):
            c = prod[k]
            if c:
                for i in range(f + 1):
                    prod[k - f + i] = (prod[k - f + i] - c * g[i]) % p
        return self._encode(prod[:f])

    def add(self, a, b):
        return self._add[a][b] if self._add else self._slow_add(a, b)

    def mul(self, a, b):
        return self._mul[a][b] if self._mul else self._slow_mul(a, b)

    def neg(self, a):
        return self._neg[a]

    def from_coords(self, coords):
        """Residue of sum c_i x^i with p-integral rational c_i."""
        digits = [0] * self.f
        # reduce the polynomial modulo g
        poly = [0] * max(len(coords), self.f)
        for i, c in enumerate(coords):
            c = Fraction(c)
            if c.denominator % self.p == 0:
                raise NotPIntegral("coordinate %s has %d in the denominator" % (c, self.p))
            poly[i] = c.numerator * pow(c.denominator, -1, self.p) % self.p
        for k in range(len(poly) - 1, self.f - 1, -1):
            c = poly[k]
            if c:
                for i in range(self.f + 1):
                    poly[k - self.f + i] = (poly[k - self.f + i] - c * self.modulus[i]) % self.p
        digits = poly[:self.f]
        return self._encode(digits)

    def __repr__(self):
        return "FiniteField(q=%d)" % self.q


def residue_field(prime):
    return FiniteField(prime.rational_prime, prime.local_generator)


def _as_prime(prime, K=QQ_FIELD):
    if isinstance(prime, PrimeIdealData):
        return prime
    ps = prime_ideal_above(K, int(prime))
    if len(ps) != 1:
        raise ValidationError("%d splits in %s; pass a PrimeIdealData" % (prime, K))
    return ps[0]


def _entries(m):
    if hasattr(m, "entries"):
        return tuple(m.entries())
    if len(m) == 2:
        (a, b), (c, d) = m
        return (a, b, c, d)
    return tuple(m)


def _coords(x):
    if isinstance(x, AlgebraicNumber):
        return x.coords
    return (Fraction(x),)


def mat_mul(x, y):
    a, b, c, d = x
    e, f, g, h = y
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def mat_inv(x):
    a, b, c, d = x
    return (d, -b, -c, a)


def _mat_key(x):
    k = tuple(_coords(e) for e in x)
    n = tuple(_coords(-e) for e in x)
    return min(k, n)


@dataclass
class FiniteMatrixGroup:
    field: FiniteField
    generators: list
    elements: frozenset = None
    projective: bool = False

    @property
    def q(self):
        return self.field.q

    @property
    def order(self):
        if self.elements is None:
            raise ValueError("closure not computed")
        return len(self.elements)

    @property
    def has_minus_one(self):
        m = self.field.neg(1)
        return (m, 0, 0, m) in self.elements

    @property
    def projective_order(self):
        if self.field.p != 2 and self.has_minus_one:
            return self.order // 2
        return self.order

    @property
    def sl2_order(self):
        q = self.q
        return q * (q * q - 1)

    @property
    def is_full(self):
        return self.order == self.sl2_order

    def mul(self, x, y):
        F = self.field
        a, b, c, d = x
        e, f, g, h = y
        m, s = F.mul, F.add
        return (s(m(a, e), m(b, g)), s(m(a, f), m(b, h)),
                s(m(c, e), m(d, g)), s(m(c, f), m(d, h)))

    def identity(self):
        return (1, 0, 0, 1)


def reduce_matrix(m, prime, F=None):
    F = F or residue_field(prime)
    out = []
    for x in _entries(m):
        if isinstance(x, AlgebraicNumber) and x.field.degree > 1:
            if x.field is not prime.field:
                raise ValidationError("entry from another field")
            if not x.is_zero() and valuation(x, prime) < 0:
                raise NotPIntegral("entry %s has negative valuation" % x)
        else:
            c = Fraction(_coords(x)[0])
            if c.denominator % prime.rational_prime == 0:
                raise NotPIntegral("entry %s is not %d-integral" % (c, prime.rational_prime))
        out.append(F.from_coords(_coords(x)))
    return tuple(out)


def reduce_generators(gens, prime):
    """Images of the generators in SL(2, O_K/P)."""
    prime = _as_prime(prime)
    F = residue_field(prime)
    images = []
    for g in gens:
        ent = _entries(g)
        a, b, c, d = ent
        if a * d - b * c != 1:
            raise ValidationError("generator with determinant != 1")
        images.append(reduce_matrix(ent, prime, F))
    return FiniteMatrixGroup(F, images)


def group_closure(g, cap=DEFAULT_CAP):
    """All elements generated by ``g.generators`` (breadth first)."""
    if g.q > cap:
        raise CapExceeded("q = %d exceeds the cap %d" % (g.q, cap))
    one = g.identity()
    seen = {one}
    queue = deque([one])
    gens = list(g.generators)
    while queue:
        x = queue.popleft()
        for s in gens:
            y = g.mul(x, s)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return FiniteMatrixGroup(g.field, gens, frozenset(seen), g.projective)


# index data

@dataclass
class CongruenceReport:
    prime: PrimeIdealData
    order: int
    index: int
    full: bool
    area_ratio: int
    base_area: Fraction
    bounds: str
    trace_residues: list = field(default_factory=list)

    @property
    def norm(self):
        return self.prime.norm

    @property
    def area(self):
        """Area / pi of the congruence cover, or None without a base area."""
        return None if self.base_area is None else self.index * self.base_area

    def to_json(self):
        return {
            "prime": self.prime.to_json(),
            "norm": self.norm,
            "order": self.order,
            "index": self.index,
            "full": self.full,
            "area_ratio": self.area_ratio,
            "area_over_pi": None if self.area is None else str(self.area),
            "lower_bound": str(Fraction(self.norm ** 3, 4)),
            "upper_bound": str(Fraction(self.norm ** 3, 2)),
            "bounds": self.bounds,
            "trace_residues": [str(r) for r in self.trace_residues],
        }


def index_bounds(index, N, full, p):
    """'pass', 'fail' or 'not-applicable' for N^3/4 <= index <= N^3/2.

    The bound is only claimed for a full quotient with odd residue
    characteristic (the center of SL(2, F_q) is trivial when q is even).
    """
    if not full or p == 2:
        return "not-applicable"
    return "pass" if Fraction(N ** 3, 4) <= index <= Fraction(N ** 3, 2) else "fail"


def congruence_index(gens, prime, base_area=None, word_budget=0, cap=DEFAULT_CAP):
    """Index of the principal congruence subgroup, read off the finite image."""
    prime = _as_prime(prime)
    G = group_closure(reduce_generators(gens, prime), cap)
    index = G.projective_order
    residues = []
    if word_budget:
        try:
            residues = [w.residue for w in kernel_trace_congruence(gens, prime, word_budget)]
        except NoKernelElementFound:
            residues = []
    return CongruenceReport(prime, G.order, index, G.is_full, index,
                            None if base_area is None else Fraction(base_area),
                            index_bounds(index, prime.norm, G.is_full, prime.rational_prime),
                            residues)


# kernel elements

@dataclass
class KernelWitness:
    word: tuple
    matrix: tuple
    trace: object
    value: object           # 4 - Tr^2
    valuation: object       # ord_P(4 - Tr^2), None when the value is 0
    residue: object         # value mod p^2 over Q, else 0 / "nonzero"
    congruent: bool

    @property
    def word_length(self):
        return len(self.word)


def matrix_ball(gens, L):
    """Distinct (+-) matrices of word length <= L, shortest words first."""
    gens = [_entries(g) for g in gens]
    letters = []
    for i, g in enumerate(gens):
        letters.append(((i, 1), g))
        inv = mat_inv(g)
        if _mat_key(inv) != _mat_key(g):
            letters.append(((i, -1), inv))
    one = (1, 0, 0, 1)
    if gens and isinstance(gens[0][0], AlgebraicNumber):
        K = gens[0][0].field
        one = (K.one(), K.zero(), K.zero(), K.one())
    out = [((), one)]
    seen = {_mat_key(one)}
    frontier = out[:]
    for _ in range(L):
        nxt = []
        for w, m in frontier:
            for letter, g in letters:
                if w and w[-1] == (letter[0], -letter[1]):
                    continue
                h = mat_mul(m, g)
                k = _mat_key(h)
                if k in seen:
                    continue
                seen.add(k)
                nxt.append((w + (letter,), h))
        out.extend(nxt)
        frontier = nxt
    return out


def _is_pm_identity(r, F):
    m = F.neg(1)
    return r == (1, 0, 0, 1) or r == (m, 0, 0, m)


def _is_pm_one_exact(m):
    a, b, c, d = m
    return b == 0 and c == 0 and a == d and (a == 1 or a == -1)


def kernel_elements(gens, prime, word_budget):
    prime = _as_prime(prime)
    F = residue_field(prime)
    out = []
    for w, m in matrix_ball(gens, word_budget):
        if not w or _is_pm_one_exact(m):
            continue
        if _is_pm_identity(reduce_matrix(m, prime, F), F):
            out.append((w, m))
    return out


def _witness(w, m, prime):
    tr = m[0] + m[3]
    value = 4 - tr * tr
    p = prime.rational_prime
    if value == 0:
        return KernelWitness(w, m, tr, value, None, 0, True)
    v = valuation(value, prime) if isinstance(value, AlgebraicNumber) and \
        value.field.degree > 1 else _vq(Fraction(_coords(value)[0]), p)
    if prime.field.degree == 1:
        residue = Fraction(_coords(value)[0]).numerator % (p * p)
    else:
        residue = 0 if v >= 2 else "nonzero"
    return KernelWitness(w, m, tr, value, v, residue, v >= 2)


def _vq(x, p):
    v, n, d = 0, x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def kernel_trace_congruence(gens, prime, word_budget):
    """4 - Tr^2 modulo P^2 for every kernel element found in the word ball."""
    prime = _as_prime(prime)
    found = kernel_elements(gens, prime, word_budget)
    if not found:
        raise NoKernelElementFound("no nontrivial element reduces to +-1 within %d letters"
                                   % word_budget)
    return [_witness(w, m, prime) for w, m in found]


# height bounds

@dataclass
class HeightBound:
    tau: object
    C: float
    c: float
    threshold: Fraction
    checks: list
    violations: list
    elliptic_flags: list

    @property
    def slope(self):
        return self.C

    def to_json(self):
        return {"tau": float(mpmath.mpf(ivl.hi(self.tau))), "C": self.C, "c": self.c,
                "threshold": str(self.threshold), "checked": len(self.checks),
                "violations": len(self.violations), "elliptic_flags": len(self.elliptic_flags)}


def height_systole_bound(gens, prime, d, word_budget=8):
    """Constants of the word-length bound and checks on kernel elements.

    With tau the largest generator height, H(eta) <= (4 tau)^(w-1) tau, and
    H(Tr^2) >= N^(2/d)/16 for kernel elements; together
    w >= C log N - c with C = 1/(d log 4tau), c = log(16 tau)/log(4tau) - 1.
    """
    prime = _as_prime(prime)
    N = prime.norm
    taus = [height_matrix(_as_rows(g)) for g in gens]
    tau_hi = max(ivl.hi(h.value) for h in taus)
    tau = max((h.value for h in taus), key=lambda v: ivl.hi(v))
    t = float(tau_hi)
    C = 1 / (d * log(4 * t))
    c = log(16 * t) / log(4 * t) - 1
    threshold_sq = Fraction(N ** 2, 16 ** d) if d == 1 else None
    checks, violations, elliptic = [], [], []
    for wit in kernel_trace_congruence(gens, prime, word_budget):
        h = height_number(wit.trace * wit.trace)
        lower = mpmath.mpf(N) ** (mpmath.mpf(2) / d) / 16
        ok_height = h.lower >= lower
        ok_word = wit.word_length >= C * log(N) - c - 1e-12
        hm = height_matrix(_as_rows(wit.matrix))
        chain = hm.lower <= (4 * tau_hi) ** (wit.word_length - 1) * tau_hi
        rec = {"word": wit.word, "height_tr2": h, "height_ok": ok_height,
               "word_ok": ok_word, "chain_ok": chain}
        checks.append(rec)
        if not (ok_height and ok_word and chain):
            violations.append(rec)
        if h.upper <= 4:
            elliptic.append(rec)
    return HeightBound(tau, C, c, threshold_sq, checks, violations, elliptic)


def _as_rows(m):
    a, b, c, d = _entries(m)
    return [[a, b], [c, d]]


def torsion_threshold(prime, d):
    """True when N(P) > 8^d, the torsion-free gate for Gamma(P)."""
    N = prime.norm if isinstance(prime, PrimeIdealData) else int(prime)
    return N > 8 ** d


# growth table

GROWTH_COLUMNS = ["p", "norm", "index", "area_over_pi", "min_kernel_trace_height",
                  "min_kernel_length", "gated", "bounds", "status"]


@dataclass
class GrowthRow:
    p: int
    norm: int
    index: object
    area: object
    min_height: object
    min_length: object
    gated: bool
    bounds: str
    status: str

    def csv_row(self):
        return {
            "p": self.p,
            "norm": self.norm,
            "index": "" if self.index is None else self.index,
            "area_over_pi": "" if self.area is None else str(self.area),
            "min_kernel_trace_height": "" if self.min_height is None
            else mpmath.nstr(self.min_height, 12),
            "min_kernel_length": "" if self.min_length is None
            else mpmath.nstr(self.min_length, 12),
            "gated": int(self.gated),
            "bounds": self.bounds,
            "status": self.status,
        }


def _power(m, n):
    out = None
    for _ in range(n):
        out = m if out is None else mat_mul(out, m)
    return out


def kernel_sample(gens, prime, word_budget, power_words=3):
    """Kernel elements from the ball, powers g^k with k the order of g mod P
    for short words g, and pairwise products of all of these."""
    prime = _as_prime(prime)
    F = residue_field(prime)
    G = FiniteMatrixGroup(F, [])
    found = kernel_elements(gens, prime, word_budget)
    seen = {_mat_key(m) for _, m in found}
    for w, m in matrix_ball(gens, power_words):
        if not w:
            continue
        r = reduce_matrix(m, prime, F)
        x, k = r, 1
        while not _is_pm_identity(x, F):
            x = G.mul(x, r)
            k += 1
        pm = _power(m, k)
        if _is_pm_one_exact(pm) or _mat_key(pm) in seen:
            continue
        seen.add(_mat_key(pm))
        found.append((w * k, pm))
    base = list(found)
    for i, (w1, x) in enumerate(base):
        for w2, y in base[i + 1:]:
            z = mat_mul(x, y)
            if _is_pm_one_exact(z) or _mat_key(z) in seen:
                continue
            seen.add(_mat_key(z))
            found.append((w1 + w2, z))
    return found


def growth_table(gens, primes, word_budget=8, base_area=Fraction(1, 3), d=1,
                 K=QQ_FIELD, cap=DEFAULT_CAP):
    """Per-prime congruence data plus a fit of min length against log area.

    Hyperbolic kernel elements come from :func:`kernel_sample`.
    """
    rows = []
    for p in primes:
        try:
            P = _as_prime(p, K)
            rep = congruence_index(gens, P, base_area, cap=cap)
            found = kernel_elements(gens, P, word_budget)
        except NotPIntegral as e:
            rows.append(GrowthRow(p, None, None, None, None, None, False, "skipped",
                                  "skipped: %s" % e))
            continue
        mats = [m for _, m in kernel_sample(gens, P, word_budget)]
        min_h, min_len = None, None
        for m in mats:
            tr = m[0] + m[3]
            if ivl.sign(tr * tr - 4) <= 0:
                continue
            h = height_number(tr * tr)
            if min_h is None or h.lower < min_h:
                min_h = h.lower
            ell = ivl.lo(length_from_trace(tr, mpmath.mpf(10) ** -12))
            if min_len is None or ell < min_len:
                min_len = ell
        gated = not torsion_threshold(P, d)
        rows.append(GrowthRow(p, P.norm, rep.index, rep.area, min_h, min_len, gated,
                              rep.bounds, "gated" if gated else "ok"))
    return rows


def fit_slope(rows):
    """Least-squares slope of min length against log(area) over usable rows."""
    pts = [(log(float(r.area)), float(r.min_length)) for r in rows
           if r.area is not None and r.min_length is not None]
    if len(pts) < 2:
        return None
    mx = sum(x for x, _ in pts) / len(pts)
    my = sum(y for _, y in pts) / len(pts)
    den = sum((x - mx) ** 2 for x, _ in pts)
    return sum((x - mx) * (y - my) for x, y in pts) / den if den else None


SL2Z = ((1, 1, 0, 1), (0, -1, 1, 0))
