"""Semi-arithmetic hexagon groups: certificates, trace fields, lengths, covers.

The group for a positive unit u of a totally real field K is generated by
the half-turns about the vertices of a right-angled hexagon built from the
trirectangle with sinh a = u.  Its genus-two and genus-g covers contain the
element C1 C2, a translation of length 2 arccosh(1 + 2u^2).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key

import mpmath
from mpmath import iv

from . import intervals as ivl
from .errors import (
    BudgetTooSmall,
    IntegralityFailure,
    NoHyperbolicFound,
    NotAUnit,
    TotallyRealFailure,
    ValidationError,
)
from .grouptheory import DISTINGUISHED, abelianization_rank, surface_cover, word_ball
from .hypgeom import Kind, abs_trace, build_hexagon_group, classify, translation_length
from .linalg import IntegerLattice, echelon, solve_combination
from .numfield import (
    AlgebraicNumber,
    as_number,
    is_algebraic_integer,
    make_field,
    unit_sweep,
)

MONOMIAL_CAP = 8


@dataclass
class SemiArithCertificate:
    group: object
    trace_ring_generators: list
    totally_real_witness: list
    integrality_witness: list
    sampled: int
    members: int
    indeterminate: list
    nonmembers: list
    ring_closed: bool
    status: str

    def to_json(self):
        return {
            "base_unit": self.group.base_unit.to_json(),
            "integrality_witness": [[str(c) for c in p] for p in self.integrality_witness],
            "totally_real_witness": self.totally_real_witness,
            "sampled": self.sampled,
            "members": self.members,
            "indeterminate": len(self.indeterminate),
            "nonmembers": len(self.nonmembers),
            "ring_closed": self.ring_closed,
            "status": self.status,
        }


def _check_unit(u):
    if u.is_zero() or not is_algebraic_integer(u) or not is_algebraic_integer(u.inverse()):
        raise NotAUnit("%s is not a unit" % u)


def _real_roots(poly):
    from .numfield import _poly
    return [[str(a), str(b)] for (a, b), _ in _poly(poly).intervals()]


def _monomial_lattice(gens, cap):
    T = gens[0].tower
    vecs = []
    powers = [[T.one()] for _ in gens]
    for p, g in zip(powers, gens):
        for _ in range(cap):
            p.append(p[-1] * g)
    for i in range(cap + 1):
        for j in range(cap + 1 - i):
            for k in range(cap + 1 - i - j):
                vecs.append((powers[0][i] * powers[1][j] * powers[2][k]).rational_coords())
    return vecs


class TraceRing:
    """Z[t1, t2, t3] inside the tower, as a lattice of Q-coordinates.

    The span of monomials of total degree <= cap is computed for cap and
    cap - 1; if they agree the span is closed under multiplication and is
    the whole ring, so non-membership is then a proof.
    """

    def __init__(self, gens, cap=MONOMIAL_CAP):
        self.gens = gens
        vecs = _monomial_lattice(gens, cap)
        from math import lcm
        self.scale = lcm(*(x.denominator for v in vecs for x in v))
        self.lattice = IntegerLattice([[int(x * self.scale) for x in v] for v in vecs])
        smaller = IntegerLattice([[int(x * self.scale) for x in v]
                                  for v in _monomial_lattice(gens, cap - 1)])
        self.closed = smaller.basis == self.lattice.basis

    def contains(self, x):
        v = [c * self.scale for c in x.rational_coords()]
        if any(c.denominator != 1 for c in v):
            return False
        return self.lattice.contains([int(c) for c in v])


def certify_semi_arithmetic(group, word_budget):
    """Check the arithmetic conditions for a hexagon or trirectangle group."""
    u = group.base_unit
    _check_unit(u)
    sol = group.solution
    gens = [sol.two_cosh_a, sol.two_cosh_b, sol.two_cosh_d]
    integrality, real = [], []
    for name, t in zip(("2cosh a", "2cosh b", "2cosh d"), gens):
        mp = t.minpoly()
        if not all(c.denominator == 1 for c in mp):
            raise IntegralityFailure("%s has minimal polynomial %s" % (name, mp))
        roots = _real_roots(mp)
        if len(roots) != len(mp) - 1:
            raise TotallyRealFailure("%s has %d real conjugates out of %d"
                                     % (name, len(roots), len(mp) - 1))
        integrality.append(mp)
        real.append({"trace": name, "degree": len(mp) - 1, "real_roots": roots})
    ring = TraceRing(gens)
    ball = word_ball(group.generators, word_budget)
    members, indeterminate, nonmembers = 0, [], []
    for ent in ball:
        tr = ent.element.trace()
        if not is_algebraic_integer(tr):
            raise IntegralityFailure("trace of %s is not integral" % (ent.word,))
        if ring.contains(tr):
            members += 1
        elif ring.closed:
            nonmembers.append(ent.word)
        else:
            indeterminate.append(ent.word)
    status = "CERTIFIED" if not nonmembers and not indeterminate else \
        "FAILED" if nonmembers else "INDETERMINATE"
    return SemiArithCertificate(group, gens, real, integrality, len(ball), members,
                                indeterminate, nonmembers, ring.closed, status)


# invariant trace field

def _degree_and_powers(y):
    T = y.tower
    powers = [T.one()]
    vecs = [powers[0].rational_coords()]
    while True:
        nxt = powers[-1] * y
        v = nxt.rational_coords()
        if solve_combination(vecs, v) is not None:
            return len(powers), powers, vecs, v
        powers.append(nxt)
        vecs.append(v)


def _in_span(x, vecs):
    return solve_combination(vecs, x.rational_coords()) is not None


def _compositum_dim(a, b, da, db):
    rows = []
    pa = [a.tower.one()]
    for _ in range(da - 1):
        pa.append(pa[-1] * a)
    pb = [b.tower.one()]
    for _ in range(db - 1):
        pb.append(pb[-1] * b)
    for x in pa:
        for y in pb:
            rows.append((x * y).rational_coords())
    return len(echelon(rows)[1])


@dataclass
class TraceFieldData:
    field: object
    primitive: object
    degree: int
    traces: int


def _trace_field(elements):
    T = elements[0].tower
    prim = T.one() * 0
    deg, _, vecs, _ = _degree_and_powers(prim)
    for x in elements:
        if _in_span(x, vecs):
            continue
        dx = _degree_and_powers(x)[0]
        target = _compositum_dim(prim, x, deg, dx)
        c = 1
        while True:
            cand = prim + x * c
            dc, _, vc, _ = _degree_and_powers(cand)
            if dc == target:
                prim, deg, vecs = cand, dc, vc
                break
            c += 1
    deg, powers, vecs, top = _degree_and_powers(prim)
    coeffs = solve_combination(vecs, top)
    minpoly = [-c for c in coeffs] + [Fraction(1)]
    return prim, minpoly


def invariant_trace_field_data(group, word_budget):
    ball = word_ball(group.generators, word_budget)
    seen = {}
    for ent in ball:
        t = ent.element.trace()
        sq = t * t - 2
        seen.setdefault(sq.key(), sq)
    elems = list(seen.values())
    prim, minpoly = _trace_field(elems)
    if any(c.denominator != 1 for c in minpoly):
        raise IntegralityFailure("primitive element is not integral: %s" % minpoly)
    coeffs = [int(c) for c in minpoly]
    F = make_field(coeffs)
    if F.degree > 1:
        val = prim.enclose(256)
        for j in range(F.degree):
            lo, hi = F.root_interval(j, 240)
            if ivl.mpf_to_fraction(ivl.lo(val)) <= hi and lo <= ivl.mpf_to_fraction(ivl.hi(val)):
                F = make_field(coeffs, j)
                break
    return TraceFieldData(F, prim, F.degree, len(elems))


def invariant_trace_field(group, word_budget):
    """Field generated by traces of squares of words up to ``word_budget``.

    The degree must agree with the one found at ``word_budget - 1``.
    """
    data = invariant_trace_field_data(group, word_budget)
    if word_budget >= 1:
        prev = invariant_trace_field_data(group, word_budget - 1)
        if prev.degree != data.degree:
            raise BudgetTooSmall("degree %d at budget %d but %d at budget %d"
                                 % (prev.degree, word_budget - 1, data.degree, word_budget))
    return data.field


# lengths

@dataclass
class LengthRecord:
    unit: AlgebraicNumber
    trace: AlgebraicNumber
    length: object
    genus: int
    field_degree: int
    certificate_status: str = "unchecked"

    def csv_row(self, digits=20):
        return {
            "unit_coords": " ".join(str(c) for c in self.unit.coords),
            "t": " ".join(str(c) for c in self.trace.coords),
            "length": mpmath.nstr(_mid(self.length), digits, strip_zeros=False),
            "genus": self.genus,
            "field_degree": self.field_degree,
            "certificate_status": self.certificate_status,
        }


def _mid(x):
    with mpmath.workprec(256):
        return (ivl.lo(x) + ivl.hi(x)) / 2


def length_of_unit(u, tol=mpmath.mpf(10) ** -30):
    """2 arccosh(1 + 2u^2)."""
    u = as_number(u)
    return translation_length(u * u * 4 + 2, tol)


def _unit_bound(ell, outward):
    # u = sqrt((cosh(l/2) - 1)/2), rounded outward to a rational
    with ivl.precision(128):
        x = iv.sqrt((ivl.cosh(ivl.from_fraction(Fraction(ell)) / 2) - 1) / 2)
        v = ivl.lo(x) if outward < 0 else ivl.hi(x)
    q = ivl.mpf_to_fraction(v)
    return q.limit_denominator(1 << 40) + outward * Fraction(1, 1 << 30)


@dataclass
class SweepResult:
    records: list
    max_gap: object
    interval: tuple

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)


def density_sweep(field, fundamental_units, interval, budget, genus=2, realize=False,
                  tol=mpmath.mpf(10) ** -30):
    """Lengths 2 arccosh(1 + 2u^2) over positive units u from a unit sweep.

    ``interval`` bounds the length.  The maximal gap includes the distances
    from the interval ends to the extreme lengths.
    """
    lo, hi = (Fraction(x) for x in interval)
    if lo <= 0 or hi <= lo:
        raise ValidationError("length interval must satisfy 0 < lo < hi")
    u_lo = max(_unit_bound(lo, -1), Fraction(1, 1 << 40))
    u_hi = _unit_bound(hi, 1)
    units = unit_sweep(field, fundamental_units, (u_lo, u_hi), budget)
    records = []
    for u in units:
        if u.sign() <= 0:
            continue
        ell = length_of_unit(u, tol)
        if ivl.mpf_to_fraction(ivl.hi(ell)) < lo or ivl.mpf_to_fraction(ivl.lo(ell)) > hi:
            continue
        status = "unchecked"
        if realize:
            status = realized_length_status(u, ell)
        records.append(LengthRecord(u, u * u * 4 + 2, ell, genus, field.degree, status))
    records.sort(key=cmp_to_key(lambda a, b: (a.unit - b.unit).sign()))
    pts = [mpmath.mpf(float(lo))] + [_mid(r.length) for r in records] + [mpmath.mpf(float(hi))]
    gap = max(b - a for a, b in zip(pts, pts[1:]))
    return SweepResult(records, gap, (lo, hi))


def realized_length_status(u, ell, tol=mpmath.mpf(10) ** -20):
    """Evaluate C1 C2 in the hexagon group of u and compare lengths."""
    group = build_hexagon_group(u)
    K = surface_cover(2)
    word = K.genus_two.to_parent(DISTINGUISHED)
    g = group.evaluate(word)
    if abs_trace(g) != u * u * 4 + 2:
        return "trace-mismatch"
    if classify(g) is not Kind.HYPERBOLIC:
        return "not-hyperbolic"
    got = translation_length(g, tol)
    if ivl.width(got) > tol:
        return "too-wide"
    if ivl.hi(got) < ivl.lo(ell) or ivl.lo(got) > ivl.hi(ell):
        return "length-mismatch"
    return "certified"


@dataclass
class Realization:
    cover: object
    subgroup: object
    record: LengthRecord
    word: tuple

    def __iter__(self):
        return iter((self.subgroup, self.record))


def realize_genus(g, u):
    """Genus-g surface cover of the hexagon group containing C1 C2.

    Returns (subgroup, record); the record's length is that of C1 C2.
    """
    u = as_number(u)
    _check_unit(u)
    cover = surface_cover(g)
    word = cover.genus_two.to_parent(DISTINGUISHED)
    if not cover.contains(word):
        raise ArithmeticError("distinguished element not in the cover")
    group = build_hexagon_group(u)
    elem = group.evaluate(word)
    t = u * u * 4 + 2
    if abs_trace(elem) != t:
        raise ArithmeticError("Tr(C1 C2) != 2 + 4u^2")
    ell = translation_length(elem)
    record = LengthRecord(u, t, ell, g, u.field.degree, "certified")
    sub = cover.genus_two if cover.inner is None else cover.inner
    return Realization(cover, sub, record, word)


def cover_rank(realization):
    return abelianization_rank(realization.cover.presentation())


# systole search

@dataclass
class SystoleCandidate:
    length: object
    word: tuple
    trace: object
    status: str
    fit: tuple

    def __iter__(self):
        return iter((self.length, self.word))


def _min_trace(entries, predicate):
    best = None
    for ent in entries:
        if not ent.word or not predicate(ent.word):
            continue
        g = ent.element
        if g.is_identity() or classify(g) is not Kind.HYPERBOLIC:
            continue
        t = abs_trace(g)
        if best is None or ivl.sign(t - best[0]) < 0:
            best = (t, ent.word)
    return best


def systole_candidate(predicate, generators, L, delta=3):
    """Shortest hyperbolic element passing ``predicate`` in the word ball.

    Marked STABLE when the minimum was already reached at length L - delta,
    HEURISTIC otherwise.  ``fit`` is the empirical (C, c) with
    length >= C * wordlength - c on the ball.
    """
    ball = word_ball(generators, L)
    best = _min_trace(ball, predicate)
    if best is None:
        raise NoHyperbolicFound("no hyperbolic element in the ball of radius %d" % L)
    t, word = best
    status = "HEURISTIC"
    if L - delta >= 1:
        early = _min_trace([e for e in ball if len(e.word) <= L - delta], predicate)
        if early is not None and early[0] == t:
            status = "STABLE"
    fit = _fit_constants(ball, predicate)
    return SystoleCandidate(translation_length(t), word, t, status, fit)


def _fit_constants(ball, predicate):
    per_len = {}
    for ent in ball:
        if not ent.word or not predicate(ent.word):
            continue
        g = ent.element
        if g.is_identity() or classify(g) is not Kind.HYPERBOLIC:
            continue
        ell = float(_mid(translation_length(g, mpmath.mpf(10) ** -10)))
        w = len(ent.word)
        per_len[w] = min(per_len.get(w, ell), ell)
    if len(per_len) < 2:
        return (None, None)
    xs = sorted(per_len)
    ys = [per_len[x] for x in xs]
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    C = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum((x - mx) ** 2 for x in xs)
    c = max(C * x - y for x, y in zip(xs, ys))
    return (C, c)


def kernel_predicate(genus):
    cover = surface_cover(genus)
    return cover.contains
