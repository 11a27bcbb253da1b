"""Well-rounded ideals of real quadratic fields and the principal WR pair
``(I1, I2)`` attached to a split ``d = d1*d2``."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Iterable, Protocol

from .arith import FULL, Effort, PrimeFlag, factor, is_squarefree
from .errors import FactorizationIncomplete, InvalidPair, InvalidWitness, NotSquarefree
from .quadfield import (
    IdealRep,
    QuadField,
    QuadInt,
    canonical_ideal,
    make_field,
    shortest_vector_oracle,
)


@dataclass(frozen=True)
class PwrPair:
    d1: int
    d2: int
    field: QuadField

    @property
    def d(self) -> int:
        return self.d1 * self.d2

    @property
    def mod4(self) -> int:
        return self.d % 4

    @property
    def pell_rhs(self) -> int:
        """|t| in ``k^2 d2 - l^2 d1 = +-t``."""
        return 2 if self.mod4 == 3 else 4

    def __iter__(self):
        yield self.d1
        yield self.d2


def make_pair(d1: int, d2: int, field: QuadField | None = None) -> PwrPair:
    if d1 < 1 or d2 < 1:
        raise InvalidPair("d1, d2 must be positive")
    if not d1 < d2 <= 3 * d1:
        raise InvalidPair(f"({d1}, {d2}) outside d1 < d2 <= 3 d1")
    if d2 == 3 * d1 and (d1, d2) != (1, 3):
        raise InvalidPair("d2 = 3 d1 only for (1, 3)")
    d = d1 * d2
    if d % 2 == 0:
        raise InvalidPair(f"d = {d} must be odd")
    if field is None:
        try:
            field = make_field(d)
        except NotSquarefree as exc:
            raise InvalidPair(str(exc)) from exc
    elif field.d != d:
        raise InvalidPair("field does not match d1*d2")
    return PwrPair(d1, d2, field)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def _divisors(n: int, effort: Effort = FULL) -> list[int]:
    parts = factor(n, effort)
    if any(f.flag is not PrimeFlag.PRIME for f in parts):
        raise FactorizationIncomplete(f"could not fully factor {n}")
    exps: dict[int, int] = {}
    for f in parts:
        exps[f.value] = exps.get(f.value, 0) + 1
    divs = [1]
    for p, e in exps.items():
        divs = [q * p**i for q in divs for i in range(e + 1)]
    return sorted(divs)


@dataclass(frozen=True)
class WrIdealList:
    field: QuadField
    entries: tuple[IdealRep, ...]

    @property
    def norms(self) -> list[int]:
        return [I.norm for I in self.entries]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def in_wr_window(a: int, disc: int) -> bool:
    """sqrt(disc/3) <= a <= sqrt(3 disc), both ends closed."""
    return 3 * a * a >= disc and a * a <= 3 * disc


def enumerate_wr(field: QuadField) -> WrIdealList:
    D = field.disc
    out = [
        canonical_ideal(field, a, -a)
        for a in _divisors(D)
        if in_wr_window(a, D) and (D - a * a) % (4 * a) == 0
    ]
    return WrIdealList(field, tuple(out))


def write_wr_jsonl(wr: WrIdealList, sink: IO[str]) -> int:
    for I in wr:
        sink.write(json.dumps({"d": str(wr.field.d), "a": str(I.a), "b": str(I.b), "norm": str(I.norm)}) + "\n")
    return len(wr)


def split_candidates(d: int) -> list[PwrPair]:
    """All splits d = d1*d2 with d1 < d2 <= 3 d1 (d odd, squarefree)."""
    if d < 2 or d % 2 == 0:
        raise InvalidPair(f"d = {d} must be odd and > 1")
    if not is_squarefree(d):
        raise InvalidPair(f"d = {d} is not squarefree")
    field = make_field(d)
    return [
        PwrPair(d1, d // d1, field)
        for d1 in _divisors(d)
        if d1 * d1 < d <= 3 * d1 * d1
    ]


# ---------------------------------------------------------------------------
# the PWR pair
# ---------------------------------------------------------------------------

def _di(pair: PwrPair, which: int) -> int:
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    return pair.d1 if which == 1 else pair.d2


def pwr_ideal(pair: PwrPair, which: int) -> IdealRep:
    di = _di(pair, which)
    if pair.mod4 == 3:
        return canonical_ideal(pair.field, 2 * di, 2 * di)
    return canonical_ideal(pair.field, di, di)


def build_pwr_ideals(pair: PwrPair) -> tuple[IdealRep, IdealRep]:
    return pwr_ideal(pair, 1), pwr_ideal(pair, 2)


def minimal_basis(pair: PwrPair, which: int) -> tuple[QuadInt, QuadInt, Fraction]:
    """The closed-form minimal basis ``d_i +- delta`` (or halves) and the
    lattice minimum, re-derived by the reduction oracle before returning."""
    di, d, F = _di(pair, which), pair.d, pair.field
    if pair.mod4 == 3:
        e1 = QuadInt.from_sqrt_d(F, di, 1)
        e2 = QuadInt.from_sqrt_d(F, di, -1)
        minimum = Fraction(2 * (di * di + d))
    else:
        e1 = QuadInt.from_sqrt_d(F, di, 1, 2)
        e2 = QuadInt.from_sqrt_d(F, di, -1, 2)
        minimum = Fraction(di * di + d, 2)
    oracle_min, _ = shortest_vector_oracle((e1, e2))
    if oracle_min != minimum:
        raise AssertionError(f"minimum mismatch for {pair}: {oracle_min} != {minimum}")
    return e1, e2, minimum


def ramified_prime(field: QuadField, p: int) -> IdealRep:
    """The unique prime ideal above a prime p dividing the discriminant."""
    D = field.disc
    for b in range(2 * p):
        if (D - b * b) % (4 * p) == 0:
            return canonical_ideal(field, p, b)
    raise ValueError(f"{p} does not ramify in {field}")


@dataclass(frozen=True)
class PwrFactorization:
    """Prime ideals ``(p, P_p)`` whose product is I1, resp. I2."""

    i1: tuple[tuple[int, IdealRep], ...]
    i2: tuple[tuple[int, IdealRep], ...]


def factor_pwr(pair: PwrPair, effort: Effort = FULL) -> PwrFactorization:
    F = pair.field
    lists = []
    for which in (1, 2):
        di = _di(pair, which)
        parts = factor(di, effort) if di > 1 else []
        if any(f.flag is not PrimeFlag.PRIME for f in parts):
            raise FactorizationIncomplete(f"could not fully factor {di}")
        primes = ([2] if pair.mod4 == 3 else []) + [f.value for f in parts]
        lists.append(tuple((p, ramified_prime(F, p)) for p in primes))
    # distinct ramified primes, each containing I_i, norms multiplying to N(I_i)
    # => I_i is exactly their product
    for which, lst in zip((1, 2), lists):
        I = pwr_ideal(pair, which)
        norm = 1
        for _, P in lst:
            norm *= P.norm
            if not P.contains_ideal(I):
                raise AssertionError(f"{P} does not contain {I}")
        if norm != I.norm:
            raise AssertionError(f"norm mismatch for {I}")
    return PwrFactorization(*lists)


class _Witness(Protocol):
    k: int
    l: int
    t: int


def generator_from_pell(pair: PwrPair, sol: _Witness) -> QuadInt:
    k, l, t = sol.k, sol.l, sol.t
    if k * k * pair.d2 - l * l * pair.d1 != t or abs(t) != pair.pell_rhs:
        raise InvalidWitness(f"k^2 d2 - l^2 d1 != {t} or wrong |t| for {pair.d1},{pair.d2}")
    F = pair.field
    if pair.mod4 == 3:
        alpha = QuadInt.from_sqrt_d(F, pair.d1 * l, -k)
    else:
        if (k - l) % 2:
            raise InvalidWitness("k and l must have equal parity when d = 1 mod 4")
        # ((l+k)/2)(d1+sqrt d)/2 + ((l-k)/2)(d1-sqrt d)/2 = (l d1 + k sqrt d)/2
        alpha = QuadInt.from_sqrt_d(F, pair.d1 * l, k, 2)
    I1 = pwr_ideal(pair, 1)
    if abs(alpha.norm()) != I1.norm or not I1.contains(alpha):
        raise AssertionError(f"generator {alpha} does not generate {I1}")
    return alpha


def iter_pairs(ds: Iterable[int]) -> Iterable[PwrPair]:
    for d in ds:
        yield from split_candidates(d)


__all__ = [
    "PwrFactorization",
    "PwrPair",
    "WrIdealList",
    "build_pwr_ideals",
    "enumerate_wr",
    "factor_pwr",
    "generator_from_pell",
    "in_wr_window",
    "make_pair",
    "minimal_basis",
    "pwr_ideal",
    "ramified_prime",
    "split_candidates",
    "write_wr_jsonl",
]
