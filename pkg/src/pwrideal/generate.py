"""Producing PWR pairs without solving a Pell equation.

Pick ``(k, l)`` first, solve the linear equation ``k^2 u - l^2 v = +-1`` (or
``+-4``) and read ``(d1, d2)`` off the Bezout coefficients.  Every member of
the family ``d1 + s1*n, d2 + s2*n`` satisfies the same Pell identity; the
generators return the smallest ``n >= 0`` for which both are squarefree.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .arith import (
    FULL,
    BezoutPair,
    Effort,
    SquarefreeVerdict,
    bezout_squares,
    is_probable_prime,
    is_squarefree,
    primes_up_to,
)
from .errors import BadL, BudgetExhausted, InvariantViolation, NonPositive, NotSolvable
from .pell import PellSolution, fundamental_unit, solve_pair
from .wrideal import PwrPair, make_pair

DEFAULT_N_MAX = 64


class GenClass(enum.Enum):
    MOD3 = "3mod4"  # k, l odd
    MOD1_ODD = "1mod4-odd"  # k, l odd
    MOD1_EVEN = "1mod4-even"  # k, l even

    @property
    def residue(self) -> int:
        return 3 if self is GenClass.MOD3 else 1

    @property
    def pell_rhs(self) -> int:
        return 2 if self is GenClass.MOD3 else 4


@dataclass(frozen=True)
class GenTuple:
    k: int
    l: int
    bezout: BezoutPair
    n: int
    d1: int
    d2: int
    parity_class: GenClass
    squarefree_status: tuple[SquarefreeVerdict, SquarefreeVerdict]
    base: tuple[int, int]
    step: tuple[int, int]

    @property
    def t(self) -> int:
        return self.k * self.k * self.d2 - self.l * self.l * self.d1

    @property
    def d(self) -> int:
        return self.d1 * self.d2

    @property
    def certified(self) -> bool:
        return all(v.certified for v in self.squarefree_status)

    def solution(self) -> PellSolution:
        return PellSolution(self.k, self.l, self.t)

    def pair(self) -> PwrPair:
        return make_pair(self.d1, self.d2)

    def to_json(self) -> dict:
        return {
            "class": self.parity_class.value,
            "k": str(self.k),
            "l": str(self.l),
            "u": str(self.bezout.u),
            "v": str(self.bezout.v),
            "n": self.n,
            "d1": str(self.d1),
            "d2": str(self.d2),
            "t": str(self.t),
            "squarefree": [v.status.value for v in self.squarefree_status],
        }


def check_tuple(t: GenTuple) -> GenTuple:
    """Raise InvariantViolation unless ``t`` is a valid PWR tuple."""
    problems = []
    if abs(t.t) != t.parity_class.pell_rhs:
        problems.append(f"k^2 d2 - l^2 d1 = {t.t}")
    if not t.d1 < t.d2 < 3 * t.d1:
        problems.append("outside d1 < d2 < 3 d1")
    if t.d % 4 != t.parity_class.residue:
        problems.append(f"d = {t.d % 4} mod 4")
    if gcd(t.d1, t.d2) != 1:
        problems.append("d1, d2 not coprime")
    if (t.d1, t.d2) != (t.base[0] + t.step[0] * t.n, t.base[1] + t.step[1] * t.n):
        problems.append("not on the family line")
    if not all(t.squarefree_status):
        problems.append("square factor")
    if problems:
        raise InvariantViolation(f"tuple k={t.k}, l={t.l}, n={t.n}: " + "; ".join(problems))
    return t


# ---------------------------------------------------------------------------
# choosing l
# ---------------------------------------------------------------------------

def _below_sqrt3(k: int, l: int) -> bool:
    return l * l < 3 * k * k


def validate_l(k: int, l: int, cls: GenClass) -> None:
    if not k < l or not _below_sqrt3(k, l):
        raise BadL(f"need {k} < l < sqrt(3)*{k}, got l={l}")
    if cls is GenClass.MOD1_EVEN:
        if l % 2 or gcd(k, l) != 2 or (k * l) % 8:
            raise BadL(f"l={l}: need l even, gcd(k, l) = 2 and 8 | k*l")
    elif l % 2 == 0 or gcd(k, l) != 1:
        raise BadL(f"l={l}: need l odd and coprime to k={k}")


def _validate_k(k: int, cls: GenClass) -> None:
    if cls is GenClass.MOD1_EVEN:
        if k <= 2 or k % 2:
            raise ValueError(f"k must be even and > 2, got {k}")
    elif k <= 1 or k % 2 == 0:
        raise ValueError(f"k must be odd and > 1, got {k}")


def default_l(k: int, cls: GenClass) -> int:
    _validate_k(k, cls)
    if cls is not GenClass.MOD1_EVEN:
        l = k + 2
        validate_l(k, l, cls)
        return l
    for l in range(k + 2, k + 2 * k, 2):
        if not _below_sqrt3(k, l):
            break
        if gcd(k, l) == 2 and (k * l) % 8 == 0:
            return l
    raise BadL(f"no valid even l for k={k}")


def valid_ls(k: int, cls: GenClass) -> list[int]:
    """Every admissible l for k, ascending."""
    out = []
    for l in range(k + 1, isqrt(3 * k * k) + 1):
        try:
            validate_l(k, l, cls)
        except BadL:
            continue
        out.append(l)
    return out


# ---------------------------------------------------------------------------
# the three generators
# ---------------------------------------------------------------------------

def _even_base(k: int, l: int, bz: BezoutPair) -> tuple[int, int]:
    u, v = bz.u, bz.v
    kk, ll = k * k, l * l
    if u % 2 and v % 2:
        if u % 4 == v % 4:
            # v + k^2 (2n + 1) at n = 0
            return v + kk, u + ll
        return kk // 2 + v, ll // 2 + u
    # exactly one of u, v is even; (a, b) = (even one, odd one)
    a, b = (u, v) if u % 2 == 0 else (v, u)
    if b % 4 == (a + 1) % 4:
        return kk // 4 + v, ll // 4 + u
    return 3 * kk // 4 + v, 3 * ll // 4 + u


def family_base(k: int, l: int, cls: GenClass) -> tuple[BezoutPair, tuple[int, int], tuple[int, int]]:
    """Bezout data, base pair ``(d1, d2)`` at n = 0, and family step."""
    kk, ll = k * k, l * l
    if cls is GenClass.MOD1_EVEN:
        bz = bezout_squares(k, l, 4)
        return bz, _even_base(k, l, bz), (kk, ll)
    bz = bezout_squares(k, l, 1)
    c = 2 if cls is GenClass.MOD3 else 4
    return bz, (kk + c * bz.v, ll + c * bz.u), (2 * kk, 2 * ll)


def generate(
    k: int,
    l: int | None,
    cls: GenClass,
    n_max: int = DEFAULT_N_MAX,
    effort: Effort = FULL,
) -> GenTuple:
    _validate_k(k, cls)
    if l is None:
        l = default_l(k, cls)
    else:
        validate_l(k, l, cls)
    bz, (b1, b2), (s1, s2) = family_base(k, l, cls)
    for n in range(n_max + 1):
        d1, d2 = b1 + s1 * n, b2 + s2 * n
        v1 = is_squarefree(d1, effort)
        if not v1:
            continue
        v2 = is_squarefree(d2, effort)
        if not v2:
            continue
        return check_tuple(GenTuple(k, l, bz, n, d1, d2, cls, (v1, v2), (b1, b2), (s1, s2)))
    raise BudgetExhausted(f"no squarefree pair for k={k}, l={l} with n <= {n_max}")


def alg1(k: int, l: int | None = None, n_max: int = DEFAULT_N_MAX, effort: Effort = FULL) -> GenTuple:
    """d = 3 mod 4, k and l odd."""
    return generate(k, l, GenClass.MOD3, n_max, effort)


def alg2(k: int, l: int | None = None, n_max: int = DEFAULT_N_MAX, effort: Effort = FULL) -> GenTuple:
    """d = 1 mod 4, k and l odd."""
    return generate(k, l, GenClass.MOD1_ODD, n_max, effort)


def alg3(k: int, l: int | None = None, n_max: int = DEFAULT_N_MAX, effort: Effort = FULL) -> GenTuple:
    """d = 1 mod 4, k and l even."""
    return generate(k, l, GenClass.MOD1_EVEN, n_max, effort)


ALGORITHMS = {GenClass.MOD3: alg1, GenClass.MOD1_ODD: alg2, GenClass.MOD1_EVEN: alg3}


@dataclass(frozen=True)
class FamilyMember:
    n: int
    d1: int
    d2: int
    t: int
    squarefree_status: tuple[SquarefreeVerdict, SquarefreeVerdict]
    in_window: bool

    @property
    def valid(self) -> bool:
        return self.in_window and all(self.squarefree_status)


def extend_family(base: GenTuple, n: int, effort: Effort = FULL) -> FamilyMember:
    """Shift ``base`` by n family steps (n may be negative)."""
    d1 = base.d1 + base.step[0] * n
    d2 = base.d2 + base.step[1] * n
    if d1 <= 0 or d2 <= 0:
        raise NonPositive(f"n={n} gives d1={d1}, d2={d2}")
    t = base.k**2 * d2 - base.l**2 * d1
    if t != base.t:
        raise InvariantViolation("Pell identity not preserved")
    return FamilyMember(
        base.n + n,
        d1,
        d2,
        t,
        (is_squarefree(d1, effort), is_squarefree(d2, effort)),
        d1 < d2 <= 3 * d1,
    )


# ---------------------------------------------------------------------------
# prime PWR ideals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PrimePwr:
    prime: int  # norm of a prime PWR ideal of Q(sqrt(d1*d2))
    pair: PwrPair
    solution: PellSolution
    family: str  # "p(p+-4)", "p=q=3 mod 4" or "d=3"

    def to_json(self) -> dict:
        return {
            "prime": str(self.prime),
            "d1": str(self.pair.d1),
            "d2": str(self.pair.d2),
            "d": str(self.pair.d),
            "family": self.family,
            **self.solution.to_json(),
        }


def prime_pwr_search(limit: int) -> list[PrimePwr]:
    """Fields with prime PWR ideals from the two sufficient families.

    (a) d = p(p +- 4) with p prime, p +- 4 squarefree, witness (1, 1, +-4);
    (b) d = p q, p < q < 3p primes, p = q = 3 mod 4, witness by the Pell
    solver (such equations are always solvable).
    Plus the exceptional field Q(sqrt 3).
    """
    if limit < 3:
        raise ValueError("limit must be >= 3")
    out = [PrimePwr(2, make_pair(1, 3), PellSolution(1, 1, 2), "d=3")]
    primes = primes_up_to(limit)
    for p in primes[1:]:
        for m in (p - 4, p + 4):
            if m < 1 or not is_squarefree(m):
                continue
            d1, d2 = min(p, m), max(p, m)
            if not d1 < d2 < 3 * d1:
                continue
            pair = make_pair(d1, d2)
            sol = PellSolution(1, 1, d2 - d1)
            out.append(PrimePwr(p, pair, sol, "p(p+-4)"))
    threes = [p for p in primes_up_to(3 * limit) if p % 4 == 3]
    for i, p in enumerate(threes):
        if p > limit:
            break
        for q in threes[i + 1 :]:
            if q >= 3 * p:
                break
            pair = make_pair(p, q)
            sol = solve_pair(pair, fundamental_unit(pair.field))
            if sol is None:
                raise InvariantViolation(f"no witness for primes {p}, {q}")
            out.append(PrimePwr(p, pair, sol, "p=q=3 mod 4"))
    for rec in out:
        if not rec.solution.check(rec.pair.d1, rec.pair.d2) or not is_probable_prime(rec.prime):
            raise InvariantViolation(f"bad prime record {rec}")
    return out


# ---------------------------------------------------------------------------
# squarefree density of a family
# ---------------------------------------------------------------------------

def wf(p: int, k: int, l: int, cls: GenClass) -> int:
    """Roots of f(n) = d1(n) d2(n) modulo p^2, closed form."""
    if p == 2:
        return 0
    if k % p == 0 or l % p == 0:
        return 1
    return 2


def wf_bruteforce(p: int, k: int, l: int, cls: GenClass) -> int:
    _, (b1, b2), (s1, s2) = family_base(k, l, cls)
    m = p * p
    return sum(1 for a in range(1, m + 1) if ((b1 + s1 * a) * (b2 + s2 * a)) % m == 0)


@dataclass(frozen=True)
class DensityReport:
    k: int
    l: int
    constant_part: float  # 2 * prod_{p <= B} (1 - 2/p^2)
    constant_lower: float  # provable lower bound for the full product
    correction: Fraction  # prod_{p > 2, p | k l} (p^2 - 1)/(p^2 - 2)
    c_f: float
    prime_bound: int

    def to_json(self) -> dict:
        return {
            "k": str(self.k),
            "l": str(self.l),
            "prime_bound": self.prime_bound,
            "constant_part": self.constant_part,
            "constant_lower": self.constant_lower,
            "correction": f"{self.correction.numerator}/{self.correction.denominator}",
            "c_f": self.c_f,
        }


def density_constant(prime_bound: int) -> float:
    return 2.0 * math.exp(math.fsum(math.log1p(-2.0 / (p * p)) for p in primes_up_to(prime_bound)))


def _odd_prime_divisors(n: int) -> list[int]:
    out, m, p = [], n, 3
    while m % 2 == 0:
        m //= 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 2
    if m > 1:
        out.append(m)
    return out


def cf_density(k: int, l: int, prime_bound: int = 10**6) -> DensityReport:
    if prime_bound < 3:
        raise ValueError("prime_bound must be >= 3")
    const = density_constant(prime_bound)
    # prod_{p > B} (1 - 2/p^2) >= 1 - 2 sum_{n > B} 1/n^2 >= 1 - 2/B
    lower = const * (1.0 - 2.0 / prime_bound)
    corr = Fraction(1)
    for p in _odd_prime_divisors(k * l):
        corr *= Fraction(p * p - 1, p * p - 2)
    return DensityReport(k, l, const, lower, corr, const * float(corr), prime_bound)


__all__ = [
    "ALGORITHMS",
    "DensityReport",
    "FamilyMember",
    "GenClass",
    "GenTuple",
    "NotSolvable",
    "PrimePwr",
    "alg1",
    "alg2",
    "alg3",
    "cf_density",
    "check_tuple",
    "default_l",
    "density_constant",
    "extend_family",
    "family_base",
    "generate",
    "prime_pwr_search",
    "valid_ls",
    "validate_l",
    "wf",
    "wf_bruteforce",
]
