import random
from dataclasses import replace
from fractions import Fraction
from math import gcd, isqrt

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from pwrideal.arith import SquarefreeStatus, is_squarefree, squarefree_mask
from pwrideal.errors import BadL, BudgetExhausted, InvariantViolation, NonPositive
from pwrideal.generate import (
    GenClass,
    alg1,
    alg2,
    alg3,
    cf_density,
    check_tuple,
    default_l,
    density_constant,
    extend_family,
    family_base,
    generate,
    prime_pwr_search,
    valid_ls,
    wf,
    wf_bruteforce,
)
from pwrideal.pell import PellSolution, is_principal_cycle, solve_pair
from pwrideal.wrideal import build_pwr_ideals, make_pair

M3, M1, ME = GenClass.MOD3, GenClass.MOD1_ODD, GenClass.MOD1_EVEN


def naive_first_n(k, l, cls, n_max=64):
    """Independent re-derivation of the family and its first squarefree
    member, straight from the Bezout equation (oracle)."""
    T = 4 if cls is ME else 1
    kk, ll = k * k, l * l
    # smallest-|g| solution of kk*g + ll*h = T, found by search
    best = None
    for g in range(-ll, ll + 1):
        if (T - kk * g) % ll == 0:
            if best is None or (abs(g), -g) < (abs(best), -best):
                best = g
    g, h = best, (T - kk * best) // ll
    u, v = abs(g), abs(h)
    assert kk * u - ll * v in (T, -T)
    if cls is M3:
        b1, b2, s1, s2 = kk + 2 * v, ll + 2 * u, 2 * kk, 2 * ll
    elif cls is M1:
        b1, b2, s1, s2 = kk + 4 * v, ll + 4 * u, 2 * kk, 2 * ll
    else:
        return None
    for n in range(n_max + 1):
        if is_squarefree(b1 + s1 * n) and is_squarefree(b2 + s2 * n):
            return b1 + s1 * n, b2 + s2 * n, n


# --- golden values ------------------------------------------------------------

@pytest.mark.parametrize(
    "alg,k,l,expected",
    [
        (alg1, 3, 5, (17, 47, 0)),
        (alg1, 5, 7, (77, 151, 1)),
        (alg2, 3, 5, (43, 119, 1)),
        (alg2, 5, 7, (29, 57, 0)),
        (alg3, 4, 6, (13, 29, 0)),
        (alg3, 8, 10, (71, 111, 0)),
    ],
)
def test_golden(alg, k, l, expected):
    t = alg(k, l)
    assert (t.d1, t.d2, t.n) == expected


def test_alg3_k6_default_l():
    assert default_l(6, ME) == 8
    t = alg3(6)
    assert t.l == 8 and (t.bezout.u, t.bezout.v) == (7, 4)
    assert 36 * t.d2 - 64 * t.d1 in (4, -4)


def test_alg3_branches_covered():
    """Every branch of the even case appears and yields valid tuples."""
    seen = set()
    for k in range(4, 120, 2):
        for l in valid_ls(k, ME):
            bz, (b1, b2), _ = family_base(k, l, ME)
            u, v = bz.u, bz.v
            if u % 2 and v % 2:
                seen.add("odd-same" if u % 4 == v % 4 else "odd-diff")
            else:
                a, b = (u, v) if u % 2 == 0 else (v, u)
                seen.add("quarter" if b % 4 == (a + 1) % 4 else "three-quarter")
            check_tuple(alg3(k, l))
    assert seen == {"odd-same", "odd-diff", "quarter", "three-quarter"}


@pytest.mark.parametrize("cls", [M3, M1])
def test_against_naive_rederivation(cls):
    for k in range(3, 60, 2):
        for l in valid_ls(k, cls):
            t = generate(k, l, cls)
            assert (t.d1, t.d2, t.n) == naive_first_n(k, l, cls)


# --- invariants -----------------------------------------------------------------

@settings(max_examples=150, deadline=None)
@given(st.integers(2, 400), st.sampled_from([M3, M1, ME]), st.data())
def test_tuple_invariants(kk, cls, data):
    k = 2 * kk if cls is ME else 2 * kk - 1
    ls = valid_ls(k, cls)
    if not ls:
        return
    l = data.draw(st.sampled_from(ls))
    t = generate(k, l, cls)
    assert abs(t.t) == (2 if cls is M3 else 4)
    assert t.d1 < t.d2 < 3 * t.d1
    assert t.d % 4 == cls.residue
    assert (t.d1, t.d2) == (t.base[0] + t.step[0] * t.n, t.base[1] + t.step[1] * t.n)
    assert t.step == ((2 * k * k, 2 * l * l) if cls is not ME else (k * k, l * l))
    assert all(v.status is SquarefreeStatus.SQUAREFREE for v in t.squarefree_status)


def test_generated_pairs_are_pwr():
    for alg, k in [(alg1, 3), (alg1, 5), (alg2, 5), (alg3, 4), (alg1, 9), (alg2, 11), (alg3, 8)]:
        t = alg(k)
        pair = make_pair(t.d1, t.d2)
        I1, I2 = build_pwr_ideals(pair)
        assert is_principal_cycle(I1) and is_principal_cycle(I2)
        assert solve_pair(pair) is not None


def test_mod4_for_both_parities_of_n():
    for k in range(3, 41, 2):
        for l in valid_ls(k, M3):
            for cls in (M3, M1):
                _, (b1, b2), (s1, s2) = family_base(k, l, cls)
                for n in range(4):
                    assert ((b1 + s1 * n) * (b2 + s2 * n)) % 4 == cls.residue


def test_check_tuple_catches_tampering():
    t = alg1(3, 5)
    with pytest.raises(InvariantViolation):
        check_tuple(replace(t, d2=t.d2 + 2))
    with pytest.raises(InvariantViolation):
        check_tuple(replace(t, n=1))


def test_errors():
    with pytest.raises(BadL):
        alg1(3, 4)
    with pytest.raises(BadL):
        alg1(5, 9)  # 81 > 75
    with pytest.raises(BadL):
        alg1(9, 15)  # not coprime
    with pytest.raises(BadL):
        alg3(4, 8)  # gcd 4
    with pytest.raises(BadL):
        alg3(6, 10)  # 8 does not divide 60
    with pytest.raises(ValueError):
        alg1(4)
    with pytest.raises(ValueError):
        alg3(2)
    with pytest.raises(BudgetExhausted):
        alg1(5, 7, n_max=0)


def test_default_l():
    assert default_l(3, M3) == 5 and default_l(7, M1) == 9
    assert default_l(4, ME) == 6 and default_l(8, ME) == 10 and default_l(12, ME) == 14


# --- families ---------------------------------------------------------------------

def test_extend_family_examples():
    base = alg1(3, 5)
    m = extend_family(base, 1)
    assert (m.d1, m.d2, m.t) == (35, 97, -2) and m.valid
    m = extend_family(base, 2)
    assert (m.d1, m.d2) == (53, 147) and not m.valid
    assert m.squarefree_status[1].witness == 7
    e = extend_family(alg3(4, 6), 1)
    assert (e.d1, e.d2, e.t) == (29, 65, -4)


def test_extend_family_negative():
    base = alg1(5, 7)  # (77, 151), step (50, 98)
    m = extend_family(base, -1)
    assert (m.d1, m.d2) == (27, 53)
    with pytest.raises(NonPositive):
        extend_family(base, -2)


@given(st.integers(0, 200))
def test_extend_family_preserves_identity(n):
    base = alg2(7)
    m = extend_family(base, n)
    assert 49 * m.d2 - 81 * m.d1 == base.t and m.in_window


# --- prime PWR ------------------------------------------------------------------

def test_prime_search_examples():
    recs = prime_pwr_search(10)
    fa = {(r.prime, r.pair.d) for r in recs if r.family == "p(p+-4)"}
    assert (3, 21) in fa and (7, 77) in fa
    fb = {(r.pair.d1, r.pair.d2): r.solution for r in recs if r.family == "p=q=3 mod 4"}
    assert fb[(7, 19)] == PellSolution(3, 5, -4)
    assert (7, 11) in fb
    assert recs[0].pair.d == 3


def test_prime_search_records_valid():
    recs = prime_pwr_search(200)
    for r in recs:
        assert sympy.isprime(r.prime)
        assert r.pair.d == 3 or r.pair.d % 4 == 1
        assert r.solution.check(r.pair.d1, r.pair.d2)
        I1, I2 = build_pwr_ideals(r.pair)
        assert is_principal_cycle(I1) and is_principal_cycle(I2)
    # family (b) is complete
    threes = [p for p in sympy.primerange(3, 600) if p % 4 == 3]
    expected = {(p, q) for p in threes if p <= 200 for q in threes if p < q < 3 * p}
    got = {(r.pair.d1, r.pair.d2) for r in recs if r.family == "p=q=3 mod 4"}
    assert got == expected


# --- density ----------------------------------------------------------------------

def test_wf_examples():
    assert wf(2, 3, 5, M3) == 0
    assert wf(3, 3, 5, M3) == 1
    assert wf(7, 3, 5, M3) == 2 == wf_bruteforce(7, 3, 5, M3)


def test_wf_closed_form_vs_bruteforce():
    triples = [(3, 5, M3), (5, 7, M3), (7, 9, M1), (9, 11, M1), (15, 17, M3), (21, 23, M1), (4, 6, ME), (8, 10, ME), (6, 8, ME), (12, 14, ME)]
    for p in sympy.primerange(2, 60):
        for k, l, cls in triples:
            assert wf(p, k, l, cls) == wf_bruteforce(p, k, l, cls), (p, k, l, cls)


def test_cf_density_examples():
    r = cf_density(3, 5)
    assert r.correction == Fraction(192, 161)
    assert abs(r.constant_part - 0.64526) < 1e-5
    assert abs(r.c_f - 0.7695) < 1e-4
    one = cf_density(1, 1)
    assert one.correction == 1 and one.c_f > 0.64


def test_density_constant_monotone_and_tail_bound():
    vals = [density_constant(b) for b in (10, 100, 1000, 10**4, 10**5, 10**6)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    for b in (10, 100, 1000):
        r = cf_density(3, 5, b)
        assert r.constant_lower <= vals[-1] <= r.constant_part


def test_density_empirical_floor():
    """10^4 random valid (k, l), k < 500, n in [0, 100]."""
    rng = random.Random(20240611)
    b1, b2, s1, s2 = [], [], [], []
    while len(b1) < 10**4:
        cls = rng.choice([M3, M1, ME])
        k = rng.randrange(4, 500, 2) if cls is ME else rng.randrange(3, 500, 2)
        ls = valid_ls(k, cls)
        if not ls:
            continue
        _, (x1, x2), (y1, y2) = family_base(k, rng.choice(ls), cls)
        b1.append(x1), b2.append(x2), s1.append(y1), s2.append(y2)
    n = np.arange(101, dtype=np.int64)[None, :]
    d1 = np.array(b1)[:, None] + np.array(s1)[:, None] * n
    d2 = np.array(b2)[:, None] + np.array(s2)[:, None] * n
    ok = squarefree_mask(d1.ravel()) & squarefree_mask(d2.ravel())
    assert ok.mean() > 0.55
