"""Factorization and quadratic character primitives."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from geocorr.arith import (
    chi_d,
    chi_prime,
    factorize,
    is_probable_prime,
    legendre,
    square_divisors,
)


def test_factorize_known_values():
    assert factorize(1).factors == ()
    assert factorize(2).factors == ((2, 1),)
    assert factorize(840).factors == ((2, 3), (3, 1), (5, 1), (7, 1))
    assert factorize(2**50).factors == ((2, 50),)
    # Mersenne prime beyond the trial-division range
    assert factorize(2**61 - 1).factors == ((2**61 - 1, 1),)


def test_factorize_rejects_nonpositive():
    with pytest.raises(ValueError):
        factorize(0)
    with pytest.raises(ValueError):
        factorize(-6)


@given(st.integers(min_value=1, max_value=10**12))
def test_factorize_roundtrip(n):
    f = factorize(n)
    assert f.value == n
    assert math.prod(p**e for p, e in f.factors) == n
    bases = [p for p, _ in f.factors]
    assert bases == sorted(set(bases))
    assert all(e >= 1 for _, e in f.factors)
    assert all(is_probable_prime(p) for p in bases)


def test_square_divisors_enumeration():
    assert square_divisors(factorize(720)) == [1, 2, 3, 4, 6, 12]
    assert square_divisors(factorize(1)) == [1]
    assert square_divisors(factorize(97)) == [1]


@given(st.integers(min_value=1, max_value=200000))
def test_square_divisors_match_definition(n):
    vs = square_divisors(factorize(n))
    brute = [v for v in range(1, math.isqrt(n) + 1) if n % (v * v) == 0]
    assert vs == brute


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 19, 23])
def test_legendre_against_square_sets(p):
    squares = {(x * x) % p for x in range(1, p)}
    for a in range(1, p):
        assert legendre(a, p) == (1 if a in squares else -1)
    assert legendre(0, p) == 0


def test_chi_prime_at_two_depends_on_d_mod_8():
    for d in range(1, 400):
        if d % 2 == 0:
            assert chi_prime(d, 2) == 0
        elif d % 8 == 1:
            assert chi_prime(d, 2) == 1
        else:
            assert chi_prime(d, 2) == -1


@given(
    st.integers(min_value=1, max_value=10**6).filter(lambda d: d % 4 <= 1),
    st.integers(min_value=1, max_value=10**4),
    st.integers(min_value=1, max_value=10**4),
)
def test_chi_d_completely_multiplicative(d, m1, m2):
    assert chi_d(d, m1 * m2) == chi_d(d, m1) * chi_d(d, m2)


def test_chi_d_small_table():
    # chi_5 is the quadratic character mod 5 on odd input
    assert [chi_d(5, m) for m in range(1, 6)] == [1, -1, -1, 1, 0]
    # chi_8 has period 8: 1 at 1,7 and -1 at 3,5
    assert [chi_d(8, m) for m in (1, 3, 5, 7, 9, 15)] == [1, -1, -1, 1, 1, 1]
