import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from frobstab.errors import ValidationError
from frobstab.rational import (
    alt_weighted_binomial_sum,
    as_rational,
    binomial,
    bounded_compositions,
    format_rational,
    parse_rational,
)


def pascal(nmax):
    rows = [[1]]
    for n in range(1, nmax + 1):
        prev = rows[-1]
        rows.append([1] + [prev[k - 1] + prev[k] for k in range(1, n)] + [1])
    return rows


PASCAL = pascal(40)


def test_binomial_small_values():
    assert binomial(5, 2) == 10
    assert binomial(7, 3) == 35
    assert all(binomial(n, 0) == 1 for n in range(20))


def test_binomial_matches_pascal_triangle():
    for n, row in enumerate(PASCAL):
        for k, v in enumerate(row):
            assert binomial(n, k) == v


@pytest.mark.parametrize("n,k", [(3, -1), (3, 4), (0, 1), (10, 11)])
def test_binomial_outside_range_is_zero(n, k):
    assert binomial(n, k) == 0


def test_binomial_rejects_negative_n():
    with pytest.raises(ValidationError):
        binomial(-1, 0)


@given(st.integers(0, 200), st.data())
def test_binomial_symmetry(n, data):
    k = data.draw(st.integers(0, n))
    assert binomial(n, k) == binomial(n, n - k)


def test_binomial_row_sums():
    for n in range(65):
        assert sum(binomial(n, k) for k in range(n + 1)) == 2**n


def test_compositions_forced():
    assert list(bounded_compositions(2, [1, 1])) == [(1, 1)]


def test_compositions_small_enumeration():
    got = list(bounded_compositions(2, [2, 2]))
    brute = [v for v in product(range(3), repeat=2) if sum(v) == 2]
    assert got == sorted(brute)
    assert len(got) == 3


def test_compositions_empty_when_target_too_large():
    assert list(bounded_compositions(5, [1, 1, 1])) == []


def test_compositions_is_lazy():
    gen = bounded_compositions(30, [30] * 12)
    assert next(gen) == (0,) * 11 + (30,)


@pytest.mark.parametrize("l,m", [(0, 1), (3, 1), (4, 3), (5, 4), (6, 2)])
def test_unbounded_count(l, m):
    assert sum(1 for _ in bounded_compositions(l, [l] * m)) == binomial(l + m - 1, l)


@given(st.lists(st.integers(0, 3), min_size=1, max_size=4), st.integers(0, 10))
def test_compositions_against_product(bounds, l):
    got = list(bounded_compositions(l, bounds))
    brute = sorted(
        v for v in product(*(range(b + 1) for b in bounds)) if sum(v) == l
    )
    assert got == brute


def test_alt_weighted_sum():
    assert alt_weighted_binomial_sum(2) == 0
    assert alt_weighted_binomial_sum(5) == 0
    # the identity needs n >= 2: at n = 1 only the j = 1 term survives
    assert alt_weighted_binomial_sum(1) == -1
    assert alt_weighted_binomial_sum(0) == 0
    assert all(alt_weighted_binomial_sum(n) == 0 for n in range(2, 31))


def test_serialization_roundtrip():
    assert format_rational(Fraction(0)) == "0/1"
    assert format_rational(Fraction(-6, 4)) == "-3/2"
    assert format_rational(7) == "7/1"
    assert parse_rational("7") == Fraction(7)
    assert parse_rational("-10/4") == Fraction(-5, 2)
    assert parse_rational(" 3 / 9 ") == Fraction(1, 3)


@pytest.mark.parametrize("bad", ["", "1/0", "1.5", "a/b", "1//2"])
def test_parse_rejects(bad):
    with pytest.raises(ValidationError):
        parse_rational(bad)


def test_as_rational_refuses_floats():
    with pytest.raises(ValidationError):
        as_rational(0.5)
    with pytest.raises(ValidationError):
        as_rational(True)


def test_arithmetic_roundtrip_fuzz():
    rng = random.Random(1234)
    for _ in range(10_000):
        a = Fraction(rng.getrandbits(128) - 2**127, rng.getrandbits(64) + 1)
        c = Fraction(rng.getrandbits(128) - 2**127, rng.getrandbits(64) + 1)
        assert (a + c) - c == a
        assert a.denominator > 0
        assert parse_rational(format_rational(a)) == a
