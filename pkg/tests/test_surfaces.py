import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from semiarith import intervals as ivl
from semiarith.errors import BudgetTooSmall, NoHyperbolicFound, NotAUnit
from semiarith.grouptheory import abelianization_rank, word_ball
from semiarith.hypgeom import abs_trace, build_hexagon_group, build_trirectangle_group
from semiarith.numfield import is_algebraic_integer, make_field
from semiarith.surfaces import (
    TraceRing,
    certify_semi_arithmetic,
    cover_rank,
    density_sweep,
    invariant_trace_field,
    invariant_trace_field_data,
    kernel_predicate,
    length_of_unit,
    realize_genus,
    systole_candidate,
)

ELL1 = mpmath.mpf("3.5254943480781721009")  # 2 arccosh 3


def mid(x):
    return (ivl.lo(x) + ivl.hi(x)) / 2


@pytest.fixture(scope="module")
def cubic_hexagon(cubic):
    return build_hexagon_group(cubic.gen)


# certificates

def test_certificate_cubic(cubic_hexagon):
    cert = certify_semi_arithmetic(cubic_hexagon, 4)
    assert cert.status == "CERTIFIED"
    assert cert.ring_closed
    assert cert.members == cert.sampled > 0
    for mp in cert.integrality_witness:
        assert all(c.denominator == 1 for c in mp)
    for w in cert.totally_real_witness:
        assert len(w["real_roots"]) == w["degree"]
    obj = cert.to_json()
    assert obj["status"] == "CERTIFIED" and obj["nonmembers"] == 0


def test_certificate_reproducible(cubic_hexagon):
    a = certify_semi_arithmetic(cubic_hexagon, 2).to_json()
    b = certify_semi_arithmetic(build_hexagon_group(cubic_hexagon.base_unit), 2).to_json()
    assert a == b


def test_certificate_u1():
    cert = certify_semi_arithmetic(build_trirectangle_group(1), 4)
    assert cert.status == "CERTIFIED"


def test_certificate_rejects_nonunit():
    with pytest.raises(NotAUnit):
        certify_semi_arithmetic(build_hexagon_group(Fraction(1, 2)), 2)
    with pytest.raises(NotAUnit):
        certify_semi_arithmetic(build_hexagon_group(2), 2)


def test_spot_check_beyond_budget(cubic_hexagon):
    # 50 random words longer than the budget still have integral traces
    rng = random.Random(7)
    gens = cubic_hexagon.generators
    for _ in range(50):
        n = rng.randint(5, 12)
        word = [(rng.randrange(6), 1) for _ in range(n)]
        tr = cubic_hexagon.evaluate(word).trace()
        assert is_algebraic_integer(tr)


def test_trace_ring_membership(cubic_hexagon):
    sol = cubic_hexagon.solution
    R = TraceRing([sol.two_cosh_a, sol.two_cosh_b, sol.two_cosh_d])
    assert R.closed
    assert R.contains(sol.two_cosh_a * sol.two_cosh_b - 3)
    # cosh a itself lies in the ring since 2 and u^-2 + 4 are coprime
    assert R.contains(sol.cosh_a)
    # the ring consists of algebraic integers, so cosh(a)/2 is outside it
    assert not is_algebraic_integer(sol.cosh_a / 2)
    assert not R.contains(sol.cosh_a / 2)


# trace fields

def test_invariant_trace_field_cubic(cubic_hexagon):
    data = invariant_trace_field_data(cubic_hexagon, 4)
    assert data.degree % 3 == 0
    assert data.degree == 3
    K = invariant_trace_field(cubic_hexagon, 4)
    assert K.degree == 3


def test_invariant_trace_field_u1():
    K = invariant_trace_field(build_hexagon_group(1), 4)
    assert K.degree <= 2


def test_invariant_trace_field_budget(cubic_hexagon):
    # single half-turns only see Q; the field jumps to degree 3 at radius 2
    assert invariant_trace_field(cubic_hexagon, 1).degree == 1
    with pytest.raises(BudgetTooSmall):
        invariant_trace_field(cubic_hexagon, 2)


def test_prime_degree_instance(cubic):
    # [Q(u):Q] = 3 is prime and t^2 is irrational, so the field has degree 3
    u = cubic.gen
    t = u * u * 4 + 2
    assert not (t * t).is_rational()
    data = invariant_trace_field_data(build_hexagon_group(u), 3)
    assert data.degree == 3


# lengths and sweeps

def test_length_u1():
    ell = length_of_unit(1)
    assert ivl.lo(ell) - mpmath.mpf(10) ** -18 <= ELL1 <= ivl.hi(ell) + mpmath.mpf(10) ** -18
    with mpmath.workdps(40):
        assert abs(mid(ell) - 2 * mpmath.acosh(3)) < mpmath.mpf(10) ** -28


@given(st.fractions(min_value=Fraction(1, 40), max_value=50, max_denominator=40),
       st.fractions(min_value=Fraction(1, 40), max_value=50, max_denominator=40))
def test_length_monotone(u, v):
    if u == v:
        return
    a, b = length_of_unit(u), length_of_unit(v)
    if u < v:
        assert ivl.hi(a) < ivl.lo(b)
    else:
        assert ivl.hi(b) < ivl.lo(a)


def test_density_sweep_cubic(cubic):
    u = cubic.gen
    res = density_sweep(cubic, [u, u + 1], (Fraction(1, 2), 10), 12)
    assert res.max_gap < 0.5
    assert len(res) > 50
    lengths = [mid(r.length) for r in res]
    assert lengths == sorted(lengths)
    for r in res:
        assert Fraction(1, 2) <= float(mid(r.length)) <= 10
        assert r.trace == r.unit * r.unit * 4 + 2
        assert is_algebraic_integer(r.trace)
        assert r.field_degree == 3


def test_sweep_traces_match_group(cubic):
    u = cubic.gen
    res = density_sweep(cubic, [u, u + 1], (1, 6), 3)
    for r in list(res)[:5]:
        G = build_hexagon_group(r.unit)
        assert abs_trace(G.generators[0] * G.generators[1]) == r.trace


def test_sweep_csv_row(cubic):
    u = cubic.gen
    rec = next(iter(density_sweep(cubic, [u], (1, 5), 3)))
    row = rec.csv_row()
    assert list(row) == ["unit_coords", "t", "length", "genus", "field_degree",
                         "certificate_status"]
    assert row["genus"] == 2


# covers

def test_realize_genus_two():
    sub, rec = realize_genus(2, 1)
    assert rec.trace == 6
    assert abs(mid(rec.length) - ELL1) < mpmath.mpf(10) ** -18
    assert sub.index == 2


def test_realize_genus_five():
    real = realize_genus(5, 1)
    sub, rec = real
    assert sub.index == 4
    assert cover_rank(real) == 10
    assert abs(mid(rec.length) - ELL1) < mpmath.mpf(10) ** -18
    assert real.cover.index_in_parent == 8


@pytest.mark.parametrize("g", [2, 3, 4])
def test_realize_rank(cubic, g):
    real = realize_genus(g, cubic.gen)
    assert cover_rank(real) == 2 * g


def test_realize_rejects_nonunit():
    with pytest.raises(NotAUnit):
        realize_genus(2, Fraction(1, 2))


# systole candidates

def test_systole_radius_one():
    G = build_hexagon_group(1)
    with pytest.raises(NoHyperbolicFound):
        systole_candidate(kernel_predicate(2), G.generators, 1)


def test_systole_nonincreasing():
    G = build_hexagon_group(1)
    pred = kernel_predicate(2)
    got = [mid(systole_candidate(pred, G.generators, L).length) for L in (2, 3, 4)]
    assert got == sorted(got, reverse=True)
    assert all(x <= ELL1 + mpmath.mpf(10) ** -20 for x in got)


def test_systole_candidate_in_kernel():
    G = build_hexagon_group(1)
    pred = kernel_predicate(2)
    cand = systole_candidate(pred, G.generators, 4)
    assert pred(cand.word)
    assert abs_trace(G.evaluate(cand.word)) == cand.trace
    assert cand.status in ("STABLE", "HEURISTIC")
