from fractions import Fraction
from itertools import permutations

import mpmath
import pytest
from hypothesis import given, strategies as st

from semiarith import intervals as ivl
from semiarith.errors import (
    AllElliptic,
    CoincidentPoints,
    IdentityElement,
    NonPositiveInput,
    NonPositiveUnit,
    NotHyperbolic,
    ParabolicFactor,
)
from semiarith.hypgeom import (
    Isometry,
    Kind,
    abs_trace,
    build_hexagon_group,
    build_trirectangle_group,
    classify,
    displacement_product,
    halfturn,
    halfturn_product_trace,
    hexagon_opposite_side,
    length_from_trace,
    orbifold_area,
    point_distance_cosh,
    solve_trirectangle,
    translation_length,
)
from semiarith.numfield import is_algebraic_integer, is_totally_real, make_field

TOL = mpmath.mpf(10) ** -30


def mid(x):
    return (ivl.lo(x) + ivl.hi(x)) / 2


def close(x, want, eps=mpmath.mpf(10) ** -25):
    return ivl.lo(x) - eps <= want <= ivl.hi(x) + eps


# classification and lengths

@pytest.mark.parametrize("m, kind", [
    ((1, 1, 0, 1), Kind.PARABOLIC),
    ((2, 0, 0, Fraction(1, 2)), Kind.HYPERBOLIC),
    ((0, 1, -1, 0), Kind.ELLIPTIC),
    ((-1, 0, 0, -1), None),
])
def test_classify(m, kind):
    g = Isometry(*m)
    if kind is None:
        with pytest.raises(IdentityElement):
            classify(g)
    else:
        assert classify(g) is kind


def test_translation_length_examples():
    with mpmath.workdps(40):
        want = 2 * mpmath.acosh(3)
        assert close(length_from_trace(6), want)
        assert close(length_from_trace(-6), want)
        # a trace given as the interval 2cosh(1)
        two_cosh1 = 2 * ivl.cosh(mpmath.iv.mpf(1))
        assert close(length_from_trace(two_cosh1), 2, mpmath.mpf(10) ** -12)
    g = Isometry(2, 0, 0, Fraction(1, 2))
    assert close(translation_length(g), 2 * mpmath.log(2))
    with pytest.raises(NotHyperbolic):
        translation_length(Isometry(1, 1, 0, 1))
    with pytest.raises(NotHyperbolic):
        length_from_trace(1)


def test_length_width():
    x = length_from_trace(Fraction(7, 2))
    assert ivl.width(x) <= TOL


@given(st.fractions(min_value=Fraction(201, 100), max_value=1000, max_denominator=100))
def test_length_inverts_trace(t):
    ell = length_from_trace(t)
    with mpmath.workdps(40):
        back = 2 * mpmath.cosh(mid(ell) / 2)
        assert abs(back - mpmath.mpf(t.numerator) / t.denominator) < mpmath.mpf(10) ** -25


# half-turns

def test_halfturn_traces():
    with mpmath.workdps(40):
        e = mpmath.e
        got = halfturn_product_trace((0, 1), (0, e))
        assert ivl.width(got) <= TOL
        assert close(got, 2 * mpmath.cosh(1), mpmath.mpf(10) ** -35)
        assert float(mid(got)) == pytest.approx(3.0862, abs=1e-4)
    assert close(halfturn_product_trace((0, 1), (0, 2)), mpmath.mpf(2.5))
    with pytest.raises(CoincidentPoints):
        halfturn_product_trace((0, 1), (0, 1))


def test_halfturn_is_order_two():
    h = halfturn((Fraction(1, 3), Fraction(2)))
    assert (h * h).is_identity()
    assert h.trace() == 0


points = st.tuples(st.fractions(min_value=-5, max_value=5, max_denominator=20),
                   st.fractions(min_value=Fraction(1, 10), max_value=5, max_denominator=20))


@given(points, points)
def test_trace_distance_consistency(p, q):
    if p == q:
        return
    tr = halfturn_product_trace(p, q)
    # independent formula: cosh d = 1 + |z - w|^2 / (2 y1 y2), exact for rational points
    (x1, y1), (x2, y2) = p, q
    want = 2 * (1 + ((x1 - x2) ** 2 + (y1 - y2) ** 2) / (2 * y1 * y2))
    assert ivl.width(tr) <= mpmath.mpf(10) ** -20
    assert ivl.mpf_to_fraction(ivl.lo(tr)) <= want <= ivl.mpf_to_fraction(ivl.hi(tr))
    d = 2 * point_distance_cosh(p, q)
    assert ivl.mpf_to_fraction(ivl.lo(d)) <= want <= ivl.mpf_to_fraction(ivl.hi(d))


isoms = st.tuples(*[st.integers(-4, 4)] * 3)


def unimodular(a, b, c):
    # (1 a; 0 1)(1 0; b 1)(1 c; 0 1)
    return Isometry(1, a, 0, 1) * Isometry(1, 0, b, 1) * Isometry(1, c, 0, 1)


@given(isoms, isoms)
def test_conjugation_invariance(x, y):
    g, h = unimodular(*x), unimodular(*y)
    assert abs_trace(h * g * h.inverse()) == abs_trace(g)


@given(isoms, st.integers(0, 1), isoms, st.integers(0, 1))
def test_parity_composition(x, p, y, q):
    flip = Isometry(-1, 0, 0, 1, 1)
    g = unimodular(*x) * (flip if p else Isometry(1, 0, 0, 1))
    h = unimodular(*y) * (flip if q else Isometry(1, 0, 0, 1))
    assert (g * h).parity == p ^ q
    assert (g * h).det() == (-1) ** (p ^ q)


def test_reflection_acts_by_conjugate():
    # z -> -conj(z) fixes the imaginary axis and swaps 1+i and -1+i
    r = Isometry(-1, 0, 0, 1, 1)
    assert abs(complex(r.act(mpmath.mpc(1, 1))) - complex(-1, 1)) < 1e-15
    assert abs(complex(r.act(mpmath.mpc(0, 3))) - complex(0, 3)) < 1e-15


# trirectangle

def test_trirectangle_u1():
    sol = solve_trirectangle(1)
    assert sol.sinh_b == Fraction(1, 2)
    assert sol.two_cosh_b * sol.two_cosh_b == 5
    assert sol.cosh_a * sol.cosh_a == 2
    assert sol.two_cosh_d * sol.two_cosh_d == 10
    assert float(sol.two_cosh_d) == pytest.approx(10 ** 0.5)


def test_trirectangle_monotone():
    small = [float(solve_trirectangle(u).sinh_b) for u in (1, 10, 100)]
    assert small == sorted(small, reverse=True)
    assert small[-1] == pytest.approx(1 / 200)


def test_trirectangle_errors():
    with pytest.raises(NonPositiveUnit):
        solve_trirectangle(-1)
    with pytest.raises(NonPositiveUnit):
        solve_trirectangle(0)


def test_trirectangle_cubic_integrality(cubic):
    sol = solve_trirectangle(cubic.gen)
    for x in (sol.two_cosh_a, sol.two_cosh_b, sol.two_cosh_d):
        assert is_algebraic_integer(x)
        assert is_totally_real(x)


def test_trirectangle_angle(cubic):
    # cos phi = sinh a sinh b = 1/2
    sol = solve_trirectangle(cubic.gen)
    assert sol.sinh_a * sol.sinh_b == Fraction(1, 2)


@given(st.fractions(min_value=Fraction(1, 20), max_value=20, max_denominator=30))
def test_pythagoras_exact(u):
    sol = solve_trirectangle(u)
    assert sol.cosh_d == sol.cosh_a * sol.cosh_b
    assert sol.cosh_a * sol.cosh_a - sol.sinh_a * sol.sinh_a == 1
    assert sol.cosh_b * sol.cosh_b - sol.sinh_b * sol.sinh_b == 1


def test_trirectangle_group_u1():
    G = build_trirectangle_group(1)
    S1, S2, S3, S4 = G.generators
    assert abs_trace(S4) == 1
    assert [S.trace() for S in (S1, S2, S3)] == [0, 0, 0]
    sol = G.solution
    assert abs_trace(S1 * S3) == sol.two_cosh_d
    assert abs_trace(S1 * S3) * abs_trace(S1 * S3) == 10
    assert (S4 * S4 * S4).is_identity()
    assert all(r == 0 for r in G.relator_residues)


def test_trirectangle_group_cubic(cubic):
    G = build_trirectangle_group(cubic.gen)
    sol = G.solution
    S = G.generators
    assert abs_trace(S[0] * S[1]) == sol.two_cosh_a
    assert abs_trace(S[1] * S[2]) == sol.two_cosh_b
    assert abs_trace(S[0] * S[2]) == sol.two_cosh_d
    assert all(g.is_exact() for g in S)


# hexagon

def test_hexagon_u1():
    G = build_hexagon_group(1)
    C = G.generators
    assert abs_trace(C[0] * C[1]) == 6
    prod = C[0]
    for c in C[1:]:
        prod = prod * c
    assert prod.is_identity()
    assert all((c * c).is_identity() for c in C)


def test_hexagon_sqrt2(qsqrt2):
    u = 1 + qsqrt2.gen
    G = build_hexagon_group(u)
    C = G.generators
    t = abs_trace(C[0] * C[1])
    assert t == 14 + 8 * qsqrt2.gen
    assert float(t) == pytest.approx(25.3137, abs=1e-4)


@given(st.fractions(min_value=Fraction(1, 10), max_value=10, max_denominator=10))
def test_hexagon_relators_rational(u):
    G = build_hexagon_group(u)
    assert G.evaluate([(j, 1) for j in range(6)]).is_identity()
    assert abs_trace(G.generators[0] * G.generators[1]) == 2 + 4 * u * u


def test_hexagon_json(cubic):
    G = build_hexagon_group(cubic.gen)
    obj = G.to_json()
    assert obj["names"] == ["C1", "C2", "C3", "C4", "C5", "C6"]
    assert len(obj["generators"]) == 6
    assert obj["generators"][0]["parity"] == 0


def test_hexagon_opposite_side():
    with mpmath.workdps(40):
        c1, s1 = mpmath.cosh(1), mpmath.sinh(1)
        want = mpmath.acosh((c1 + c1 * c1) / (s1 * s1))
        got = hexagon_opposite_side(1, 1, 1)
        assert close(got, want)
        assert float(want) == pytest.approx(1.70491, abs=1e-5)
        assert float((c1 + c1 * c1) / (s1 * s1)) == pytest.approx(2.8414, abs=1e-4)


@given(st.fractions(min_value=Fraction(1, 10), max_value=4, max_denominator=10),
       st.fractions(min_value=Fraction(1, 10), max_value=4, max_denominator=10),
       st.fractions(min_value=Fraction(1, 10), max_value=4, max_denominator=10))
def test_hexagon_opposite_side_symmetric(a1, a2, a3):
    x = hexagon_opposite_side(a1, a2, a3)
    y = hexagon_opposite_side(a1, a3, a2)
    assert ivl.lo(x) <= ivl.hi(y) and ivl.lo(y) <= ivl.hi(x)


def test_hexagon_opposite_side_limit():
    vals = [mid(hexagon_opposite_side(1, a, a)) for a in (1, 3, 10)]
    assert vals == sorted(vals, reverse=True)
    assert 0 < vals[-1] < 1e-3


def test_hexagon_opposite_side_errors():
    with pytest.raises(NonPositiveInput):
        hexagon_opposite_side(0, 1, 1)
    with pytest.raises(NonPositiveInput):
        hexagon_opposite_side(1, -2, 1)


# displacement

def test_displacement_examples():
    with mpmath.workdps(40):
        t = 2 * ivl.cosh(mpmath.iv.mpf(1))
        assert close(displacement_product([t, t]), 2 * mpmath.sqrt(2), mpmath.mpf(10) ** -12)
        assert close(displacement_product([t, 1]), 2, mpmath.mpf(10) ** -12)
        assert close(displacement_product([6]), 2 * mpmath.acosh(3))


def test_displacement_errors():
    with pytest.raises(ParabolicFactor):
        displacement_product([6, 2])
    with pytest.raises(AllElliptic):
        displacement_product([1, 0])


@given(st.lists(st.sampled_from([0, 1, -1, 3, -3, 5, Fraction(7, 2), 10]), min_size=1, max_size=4)
       .filter(lambda ts: any(abs(t) > 2 for t in ts)))
def test_displacement_permutation_invariant(ts):
    base = displacement_product(ts)
    for perm in set(permutations(ts)):
        other = displacement_product(list(perm))
        assert ivl.lo(other) <= ivl.hi(base) and ivl.lo(base) <= ivl.hi(other)


@given(isoms, isoms)
def test_displacement_inverse_invariant(x, y):
    g, h = unimodular(*x), unimodular(*y)
    if abs(g.trace()) <= 2 and abs(h.trace()) <= 2:
        return
    if abs(g.trace()) == 2 or abs(h.trace()) == 2:
        return
    a = displacement_product([g, h])
    b = displacement_product([g.inverse(), h.inverse()])
    assert ivl.lo(a) <= ivl.hi(b) and ivl.lo(b) <= ivl.hi(a)


def test_orbifold_area():
    assert orbifold_area(2) == 4
    assert orbifold_area(0, (2, 2, 2, 3)) == Fraction(1, 3)
    assert orbifold_area(0, (2,) * 6) == 2
