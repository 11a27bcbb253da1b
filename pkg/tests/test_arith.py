from math import gcd, isqrt, prod

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from pwrideal.arith import (
    FAST,
    FULL,
    PrimeFlag,
    SquarefreeStatus,
    bezout_squares,
    ext_gcd_canonical,
    factor,
    iroot,
    is_probable_prime,
    is_square,
    is_squarefree,
    perfect_power,
    primes_up_to,
    squarefree_mask,
)
from pwrideal.errors import NotSolvable


def naive_squarefree(n: int) -> bool:
    return all(n % (p * p) for p in range(2, isqrt(n) + 1))


# --- oracles first ---------------------------------------------------------

def test_naive_oracle_sanity():
    assert [n for n in range(1, 30) if not naive_squarefree(n)] == [4, 8, 9, 12, 16, 18, 20, 24, 25, 27, 28]


# --- Bezout ----------------------------------------------------------------

@pytest.mark.parametrize(
    "a,b,expected",
    [(9, 25, (1, -11, 4)), (25, 49, (1, 2, -1)), (16, 36, (4, -2, 1)), (64, 100, (4, 11, -7))],
)
def test_ext_gcd_canonical_examples(a, b, expected):
    assert ext_gcd_canonical(a, b) == expected


@given(st.integers(1, 10**30), st.integers(1, 10**30))
def test_ext_gcd_identity_and_range(a, b):
    g, x, y = ext_gcd_canonical(a, b)
    assert g == gcd(a, b)
    assert a * x + b * y == g
    m = b // g
    assert -m < 2 * x <= m


def test_bezout_squares_examples():
    b = bezout_squares(3, 5)
    assert (b.u, b.v) == (11, 4) and 9 * 11 - 25 * 4 == -1
    b = bezout_squares(4, 6, 4)
    assert (b.g, b.h, b.u, b.v) == (-2, 1, 2, 1)
    b = bezout_squares(8, 10, 4)
    assert (b.u, b.v) == (11, 7)


@given(st.integers(1, 5000), st.integers(1, 5000))
def test_bezout_squares_property(k, l):
    if gcd(k, l) != 1:
        return
    b = bezout_squares(k, l)
    assert k * k * b.g + l * l * b.h == 1
    assert k * k * b.u - l * l * b.v == b.sign
    assert b.u >= 0 and b.v >= 0


def test_bezout_squares_not_solvable():
    with pytest.raises(NotSolvable):
        bezout_squares(6, 9, 4)
    with pytest.raises(NotSolvable):
        bezout_squares(2, 4, 1)


# --- roots and primes --------------------------------------------------------

@given(st.integers(0, 10**60), st.integers(2, 7))
def test_iroot(n, e):
    r = iroot(n, e)
    assert r**e <= n < (r + 1) ** e


@given(st.integers(0, 10**40))
def test_is_square(n):
    assert is_square(n) == (isqrt(n) ** 2 == n)
    assert is_square(n * n)


def test_perfect_power():
    assert perfect_power(2**12) == (2, 12)
    assert perfect_power(3**5 * 7**5) == (21, 5)
    assert perfect_power(10**6 + 1) is None


def test_primes_up_to_matches_sympy():
    for lim in (1, 2, 10, 97, 1000, 65536, 100_000):
        assert list(primes_up_to(lim)) == list(sympy.primerange(2, lim + 1))


def test_is_probable_prime_against_sympy():
    for n in range(0, 5000):
        assert is_probable_prime(n) == sympy.isprime(n)
    for n in (2**61 - 1, 2**89 - 1, 10**30 + 57, 3317044064679887385961981):
        assert is_probable_prime(n) == sympy.isprime(n)


# --- factoring and squarefree -----------------------------------------------

@settings(max_examples=200)
@given(st.integers(1, 2**64 - 1))
def test_factor_complete_below_2_64(n):
    parts = factor(n)
    assert prod(f.value for f in parts) == n
    assert all(f.flag is PrimeFlag.PRIME for f in parts)
    assert {f.value for f in parts} == set(sympy.factorint(n))


def test_squarefree_small_exhaustive():
    for n in range(1, 5000):
        v = is_squarefree(n)
        assert bool(v) == naive_squarefree(n)
        if not v:
            assert n % (v.witness * v.witness) == 0


def test_squarefree_large_known():
    p, q = 1000000007, 998244353
    assert is_squarefree(p * q).status is SquarefreeStatus.SQUAREFREE
    v = is_squarefree(p * p * q)
    assert v.status is SquarefreeStatus.NOT_SQUAREFREE and v.witness == p


def test_squarefree_above_limit_tiers():
    big_p = sympy.nextprime(10**40)
    big_q = sympy.nextprime(10**45)
    v = is_squarefree(big_p * big_q, FAST)
    assert v.status is SquarefreeStatus.PROBABLY_SQUAREFREE
    assert v.effort == "fast"
    # a square of a large prime is caught by the perfect-power check
    assert not is_squarefree(big_p * big_p * 7, FAST)
    # and a small square factor by trial division
    assert not is_squarefree(big_p * big_q * 49, FAST)
    # factors below the exact Miller-Rabin range certify above 2**64
    mid = sympy.nextprime(10**20)
    assert is_squarefree(mid * 3, FULL).status is SquarefreeStatus.SQUAREFREE
    # a probable prime cofactor above that range only earns the weaker verdict
    assert is_squarefree(big_p * 3, FULL).status is SquarefreeStatus.PROBABLY_SQUAREFREE


def test_squarefree_seed_does_not_change_deterministic_results():
    for n in (1234567891011, 2**62 + 7, 49 * 1000003):
        assert is_squarefree(n, FULL) == is_squarefree(n, FULL.with_seed(99))


@settings(max_examples=50)
@given(st.lists(st.integers(1, 10**12), min_size=1, max_size=200))
def test_squarefree_mask_matches_scalar(vals):
    mask = squarefree_mask(np.array(vals, dtype=np.int64))
    assert mask.tolist() == [bool(is_squarefree(v)) for v in vals]


def test_squarefree_mask_range_and_squares_of_large_primes():
    vals = np.arange(1, 20000, dtype=np.int64)
    assert squarefree_mask(vals).tolist() == [naive_squarefree(int(v)) for v in vals]
    p = 1000003
    assert squarefree_mask(np.array([p * p, p * 999983, 4 * p], dtype=np.int64)).tolist() == [False, True, False]
    with pytest.raises(ValueError):
        squarefree_mask(np.array([0]))
