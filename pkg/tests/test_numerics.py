import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from htlab.numerics import (
    NonPositive,
    Q,
    ZeroDenominator,
    circle_distance,
    format_rational,
    is_n_adic,
    nrat,
    parse_rational,
    power_of_n_exponent,
    to_circle,
)


@pytest.mark.parametrize(
    "p, q, expected",
    [(56, 128, Fraction(7, 16)), (0, 5, Fraction(0)), (7, -128, Fraction(-7, 128))],
)
def test_nrat(p, q, expected):
    x = nrat(p, q)
    assert x == expected
    assert x.denominator > 0


def test_nrat_zero_denominator():
    with pytest.raises(ZeroDenominator):
        nrat(3, 0)


def test_format_and_parse():
    assert format_rational(nrat(0, 5)) == "0/1"
    assert format_rational(nrat(56, 128)) == "7/16"
    assert parse_rational("7/-128") == Fraction(-7, 128)
    assert parse_rational("3") == 3


@pytest.mark.parametrize("x, n, expected", [(Q(7, 16), 2, True), (Q(1, 6), 2, False), (Q(1, 6), 6, True), (Q(5, 12), 6, True), (Q(1, 9), 6, True), (Q(1, 10), 4, False)])
def test_is_n_adic(x, n, expected):
    assert is_n_adic(x, n) is expected


@pytest.mark.parametrize("x, n, expected", [(8, 2, 3), (1, 5, 0), (Q(1, 27), 3, -3), (6, 2, None), (Q(2, 3), 3, None), (Q(1, 8), 4, None)])
def test_power_of_n_exponent(x, n, expected):
    assert power_of_n_exponent(x, n) == expected


def test_power_of_n_exponent_rejects_nonpositive():
    with pytest.raises(NonPositive):
        power_of_n_exponent(0, 2)
    with pytest.raises(NonPositive):
        power_of_n_exponent(Q(-1, 4), 2)


@pytest.mark.parametrize("n", [2, 3, 5, 10])
def test_power_of_n_exponent_round_trip(n):
    for k in range(-10, 11):
        assert power_of_n_exponent(Q(n) ** k, n) == k


@pytest.mark.parametrize(
    "x, y, expected",
    [(Q(0), Q(1, 2), Q(1, 2)), (Q(1, 16), Q(15, 16), Q(1, 8)), (Q(7, 16), Q(9, 16), Q(1, 8))],
)
def test_circle_distance(x, y, expected):
    assert circle_distance(x, y) == expected
    assert circle_distance(y, x) == expected


def test_circle_distance_triangle_inequality():
    rng = random.Random(1)
    for _ in range(1000):
        x, y, z = (Q(rng.randrange(1000), rng.randrange(1, 1000)) % 1 for _ in range(3))
        assert circle_distance(x, z) <= circle_distance(x, y) + circle_distance(y, z)
        assert (circle_distance(x, y) == 0) == (x == y)


def test_to_circle():
    assert to_circle(Q(-1, 16)) == Q(15, 16)
    assert to_circle(Q(17, 16)) == Q(1, 16)


rationals = st.builds(lambda p, q: Q(p, q), st.integers(-10**6, 10**6), st.integers(1, 10**6))


@given(rationals)
def test_reduction_is_idempotent(x):
    y = nrat(x.numerator, x.denominator)
    assert y == x
    assert (y.numerator, y.denominator) == (x.numerator, x.denominator)
    assert parse_rational(format_rational(x)) == x


n_adics = st.builds(lambda p, k, n: (Q(p, n**k), n), st.integers(-1000, 1000), st.integers(0, 8), st.sampled_from([2, 3, 6, 10]))


@settings(max_examples=200)
@given(n_adics, st.integers(-1000, 1000), st.integers(0, 8))
def test_n_adic_closed_under_ring_operations(xn, p, k):
    x, n = xn
    y = Q(p, n**k)
    assert is_n_adic(x, n) and is_n_adic(y, n)
    assert is_n_adic(x + y, n)
    assert is_n_adic(x * y, n)
