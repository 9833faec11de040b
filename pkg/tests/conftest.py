import os
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from semiarith.numfield import make_field

settings.register_profile(
    "default",
    max_examples=int(os.environ.get("HYPOTHESIS_EXAMPLES", "40")),
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

# x^3 + x^2 - 2x - 1, the minimal polynomial of 2cos(2pi/7)
CUBIC = (-1, -2, 1, 1)
SQRT2 = (-2, 0, 1)


@pytest.fixture(scope="session")
def cubic():
    return make_field(CUBIC)


@pytest.fixture(scope="session")
def qsqrt2():
    return make_field(SQRT2)


small_fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)
small_ints = st.integers(min_value=-12, max_value=12)


def nonzero_elements(K, coords=small_fracs):
    return st.lists(coords, min_size=K.degree, max_size=K.degree).map(
        lambda c: K([Fraction(x) for x in c])).filter(lambda a: not a.is_zero())


def integral_elements(K):
    return st.lists(small_ints, min_size=K.degree, max_size=K.degree).map(K)
