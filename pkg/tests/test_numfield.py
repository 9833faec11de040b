from fractions import Fraction
from math import cos, pi, sqrt

import mpmath
import pytest
import sympy
from hypothesis import given, strategies as st

from semiarith import intervals as ivl
from semiarith.errors import (
    BadPrime,
    NotAUnit,
    NotIrreducible,
    NotMonic,
    NotTotallyPositive,
    NotTotallyReal,
)
from semiarith.numfield import (
    QQ_FIELD,
    AlgebraicNumber,
    height_matrix,
    height_number,
    is_algebraic_integer,
    is_totally_positive,
    is_totally_real,
    make_field,
    prime_ideal_above,
    product_formula,
    sqrt_in_field,
    sqrt_totally_positive,
    unit_sweep,
    valuation,
)

from conftest import integral_elements, nonzero_elements

X = sympy.Symbol("x")


def mid(x):
    return float((ivl.lo(x) + ivl.hi(x)) / 2)


def sympy_value(a):
    """The element as a sympy expression at the distinguished embedding."""
    K = a.field
    roots = sorted(sympy.Poly(list(reversed(K.minpoly)), X).all_roots(), key=lambda r: float(r))
    beta = roots[K.index]
    return sum(sympy.Rational(c.numerator, c.denominator) * beta ** i
               for i, c in enumerate(a.coords))


# fields and embeddings

def test_sqrt2_embeddings(qsqrt2):
    assert qsqrt2.degree == 2
    got = [mid(e) for e in qsqrt2.embeddings(80)]
    assert got == pytest.approx([-sqrt(2), sqrt(2)], abs=1e-15)


def test_cubic_embeddings_match_cosines(cubic):
    got = [mid(e) for e in cubic.embeddings(80)]
    want = sorted(2 * cos(2 * pi * k / 7) for k in (1, 2, 3))
    assert got == pytest.approx(want, abs=1e-14)
    # the distinguished root is 2cos(2pi/7)
    assert float(cubic.gen) == pytest.approx(2 * cos(2 * pi / 7), abs=1e-15)


def test_cubic_is_minpoly_of_cosine():
    # expand prod (x - 2cos(2 pi k/7)) numerically at 50 digits
    with mpmath.workdps(50):
        roots = [2 * mpmath.cos(2 * mpmath.pi * k / 7) for k in (1, 2, 3)]
        e1 = sum(roots)
        e2 = roots[0] * roots[1] + roots[0] * roots[2] + roots[1] * roots[2]
        e3 = roots[0] * roots[1] * roots[2]
        got = [-e3, e2, -e1, 1]
        assert all(abs(g - w) < mpmath.mpf(10) ** -40 for g, w in zip(got, [-1, -2, 1, 1]))


def test_root_intervals_refine(cubic):
    for j in range(3):
        lo, hi = cubic.root_interval(j, 200)
        assert hi - lo <= Fraction(1, 2 ** 200)
        f = lambda t: sum(c * t ** i for i, c in enumerate(cubic.minpoly))
        assert f(lo) * f(hi) <= 0


@pytest.mark.parametrize("poly, err", [
    ((1, 0, 1), NotTotallyReal),
    ((-2, 0, 0, 1), NotTotallyReal),
    ((1, -2, 1), NotIrreducible),
    ((-2, 0, 2), NotMonic),
])
def test_make_field_errors(poly, err):
    with pytest.raises(err):
        make_field(poly)


# integrality and positivity

def test_integrality_examples(qsqrt2, cubic):
    r = qsqrt2.gen
    assert is_algebraic_integer(1 + r)
    assert (1 + r).minpoly() == (-1, -2, 1)
    assert not is_algebraic_integer(Fraction(1, 2))
    assert is_algebraic_integer(cubic.gen)
    assert not is_algebraic_integer((1 + r) / 2)


def test_positivity_examples(qsqrt2):
    r = qsqrt2.gen
    assert is_totally_positive(3 + 2 * r)
    assert not is_totally_positive(1 + r)
    assert is_totally_positive(QQ_FIELD(1))


@given(integral_elements(make_field((-2, 0, 1))))
def test_minpoly_matches_sympy(a):
    if a.is_rational():
        return
    want = sympy.minimal_polynomial(sympy_value(a), X)
    got = sympy.Poly(list(reversed(a.minpoly())), X)
    assert sympy.Poly(want, X).monic() == got.monic()


@given(nonzero_elements(make_field((-1, -2, 1, 1))))
def test_inverse_roundtrip(a):
    assert a * a.inverse() == 1


@given(nonzero_elements(make_field((-1, -2, 1, 1))))
def test_every_element_is_totally_real(a):
    assert is_totally_real(a)


@given(nonzero_elements(make_field((-1, -2, 1, 1))))
def test_json_roundtrip(a):
    assert AlgebraicNumber.from_json(a.to_json()) == a


def test_json_format(cubic):
    obj = (cubic.gen + Fraction(1, 3)).to_json()
    assert obj == {"minpoly": [-1, -2, 1, 1], "coords": ["1/3", "1", "0"], "embedding_index": 2}


# square roots

def test_sqrt_examples(qsqrt2):
    r = qsqrt2.gen
    assert sqrt_totally_positive(3 + 2 * r) == 1 + r
    assert sqrt_totally_positive(QQ_FIELD(4)) == 2
    with pytest.raises(NotTotallyPositive):
        sqrt_totally_positive(1 + r)


def test_sqrt_factor_of_p_x2(qsqrt2):
    # minpoly of the root divides P(X^2) with P = x^2 - 6x + 1
    w = sqrt_totally_positive(3 + 2 * qsqrt2.gen)
    P = sympy.Poly(X ** 4 - 6 * X ** 2 + 1, X)
    m = sympy.Poly(list(reversed(w.minpoly())), X)
    assert P.rem(m).is_zero


def test_sqrt_outside_the_field():
    # 2 is totally positive in Q but not a square: the root lives in Q(sqrt 2)
    w = sqrt_totally_positive(QQ_FIELD(2))
    assert w.field.minpoly == (-2, 0, 1)
    assert float(w) == pytest.approx(sqrt(2))
    assert is_algebraic_integer(w) and is_totally_real(w)


@given(integral_elements(make_field((-1, -2, 1, 1))))
def test_sqrt_of_square_roundtrip(a):
    if a.is_zero():
        return
    sq = a * a
    w = sqrt_totally_positive(sq)
    assert w * w == sq
    assert w.sign() > 0


@given(integral_elements(make_field((-2, 0, 1))))
def test_sqrt_in_field_detects_nonsquares(a):
    b = a * a * 3
    if b.is_zero():
        return
    assert sqrt_in_field(b) is None


# heights

def test_height_examples(qsqrt2):
    assert mid(height_number(4).value) == pytest.approx(4)
    assert mid(height_number(Fraction(1, 2)).value) == pytest.approx(2)
    h = height_number(1 + qsqrt2.gen)
    assert mid(h.value) == pytest.approx(sqrt(1 + sqrt(2)), rel=1e-12)


def test_height_relative_width(qsqrt2):
    h = height_number(Fraction(7, 3) + qsqrt2.gen)
    assert ivl.width(h.value) <= 2.0 ** -30 * ivl.lo(h.value)


def height_over_q(q):
    # direct definition: max(1,|q|) times prod_p max(1, |q|_p)
    q = Fraction(q)
    total = max(Fraction(1), abs(q))
    for p in sympy.primefactors(q.denominator):
        total *= p ** sympy.multiplicity(p, q.denominator)
    return total


@given(st.fractions(min_value=-1000, max_value=1000, max_denominator=500).filter(bool))
def test_height_over_q_matches_definition(q):
    h = height_number(q)
    want = height_over_q(q)
    assert ivl.mpf_to_fraction(ivl.lo(h.value)) <= want <= ivl.mpf_to_fraction(ivl.hi(h.value))


def test_height_is_absolute(qsqrt2):
    a = mid(height_number(QQ_FIELD(2)).value)
    b = mid(height_number(qsqrt2(2)).value)
    assert a == pytest.approx(b, rel=1e-12)


@given(nonzero_elements(make_field((-2, 0, 1))), nonzero_elements(make_field((-2, 0, 1))))
def test_height_inequalities(a, b):
    ha, hb = height_number(a), height_number(b)
    hp = height_number(a * b)
    assert hp.lower <= ivl.hi(ha.value * hb.value)
    if not (a + b).is_zero():
        hs = height_number(a + b)
        assert hs.lower <= ivl.hi(4 * ha.value * hb.value)


def test_matrix_heights():
    assert mid(height_matrix([[1, 0], [0, 1]]).value) == pytest.approx(1)
    assert mid(height_matrix([[2, 0], [0, Fraction(1, 2)]]).value) == pytest.approx(4)
    assert mid(height_matrix([[1, 1], [0, 1]]).value) == pytest.approx(1)


@given(st.lists(st.integers(-6, 6), min_size=4, max_size=4))
def test_matrix_height_sign_invariant(e):
    a, b, c, d = e
    m = [[a, b], [c, d]]
    if not any(e):
        return
    n = [[-a, -b], [-c, -d]]
    assert mid(height_matrix(m).value) == pytest.approx(mid(height_matrix(n).value))




@given(st.lists(st.sampled_from(["T", "t", "S"]), min_size=1, max_size=6),
       st.lists(st.sampled_from(["T", "t", "S"]), min_size=1, max_size=6))
def test_matrix_height_product_bound(w1, w2):
    gens = {"T": ((1, 1), (0, 1)), "t": ((1, -1), (0, 1)), "S": ((0, -1), (1, 0))}

    def ev(w):
        m = ((1, 0), (0, 1))
        for s in w:
            g = gens[s]
            m = tuple(tuple(sum(m[i][k] * g[k][j] for k in range(2)) for j in range(2))
                      for i in range(2))
        return m

    A, B = ev(w1), ev(w2)
    AB = ev(w1 + w2)
    assert height_matrix(AB).lower <= ivl.hi(4 * height_matrix(A).value * height_matrix(B).value)


# primes and the product formula

def test_prime_splitting(qsqrt2):
    P7 = prime_ideal_above(qsqrt2, 7)
    assert [P.norm for P in P7] == [7, 7]
    P5 = prime_ideal_above(qsqrt2, 5)
    assert [P.norm for P in P5] == [25]
    assert [P.norm for P in prime_ideal_above(QQ_FIELD, 3)] == [3]


def test_bad_prime():
    # Z[sqrt 5] has index 2 in the maximal order
    K = make_field((-5, 0, 1))
    with pytest.raises(BadPrime):
        prime_ideal_above(K, 2)


def test_valuations_at_split_prime(qsqrt2):
    r = qsqrt2.gen
    P, Q = prime_ideal_above(qsqrt2, 7)
    # 3 + r has norm 7, so it lies in exactly one of the two primes
    vals = sorted([valuation(3 + r, P), valuation(3 + r, Q)])
    assert vals == [0, 1]
    assert valuation(qsqrt2(49), P) == 2


@given(nonzero_elements(make_field((-2, 0, 1))))
def test_product_formula_sqrt2(a):
    assert product_formula(a) == 1


@given(st.fractions(min_value=-500, max_value=500, max_denominator=300).filter(bool))
def test_product_formula_q(q):
    assert product_formula(q) == 1


# units

def test_unit_sweep_cubic(cubic):
    u = cubic.gen
    out = unit_sweep(cubic, [u, u + 1], (Fraction(1, 10), 10), 6)
    assert u in out
    assert all(Fraction(1, 10) <= x <= 10 for x in out)
    assert all(abs(x.norm()) == 1 for x in out)


def test_unit_sweep_budget_zero(cubic):
    u = cubic.gen
    assert unit_sweep(cubic, [u], (0, 5), 0) == [cubic.one()]
    assert unit_sweep(cubic, [u], (2, 5), 0) == []


def test_unit_sweep_sqrt2(qsqrt2):
    out = unit_sweep(qsqrt2, [1 + qsqrt2.gen], (2, 3), 3)
    assert out == [1 + qsqrt2.gen]


def test_unit_sweep_rejects_nonunit(qsqrt2):
    with pytest.raises(NotAUnit):
        unit_sweep(qsqrt2, [2 + qsqrt2.gen], (0, 10), 2)


def test_unit_sweep_closed_under_inversion(cubic):
    u = cubic.gen
    out = unit_sweep(cubic, [u, u + 1], (Fraction(1, 5), 5), 4)
    keys = {x.coords for x in out}
    for x in out:
        assert x.inverse().coords in keys


def test_unit_sweep_gap_cubic(cubic):
    u = cubic.gen
    out = unit_sweep(cubic, [u, u + 1], (0, 5), 12)
    pts = [0.0] + [float(x) for x in out] + [5.0]
    assert max(b - a for a, b in zip(pts, pts[1:])) < 0.5
