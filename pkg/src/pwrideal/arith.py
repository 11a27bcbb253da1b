"""Integer utilities: canonical Bezout coefficients, square roots, bounded
factorization and tiered squarefree testing.

Everything here is pure and deterministic.  The randomized parts of the
factoring code (Pollard-Brent rho constants, Miller-Rabin bases above the
deterministic range) draw from a ``random.Random`` seeded by the input value,
so reruns are bit-identical.
"""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, isqrt, prod

import numpy as np

from .errors import NotSolvable

__all__ = [
    "BezoutPair",
    "DETERMINISTIC_LIMIT",
    "Effort",
    "FAST",
    "FULL",
    "Factor",
    "SquarefreeStatus",
    "SquarefreeVerdict",
    "bezout_squares",
    "ext_gcd_canonical",
    "factor",
    "is_probable_prime",
    "is_square",
    "is_squarefree",
    "isqrt",
    "primes_up_to",
    "squarefree_mask",
]

DETERMINISTIC_LIMIT = 2**64
# Miller-Rabin with the first 13 prime bases is exact below this bound.
_MR_EXACT_LIMIT = 3317044064679887385961981
_MR_EXACT_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


# ---------------------------------------------------------------------------
# Bezout
# ---------------------------------------------------------------------------

def ext_gcd_canonical(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b)``.

    ``x`` is the representative of smallest magnitude, ``|x| <= b/(2g)``;
    on a tie the non-negative one is taken.

    >>> ext_gcd_canonical(9, 25)
    (1, -11, 4)
    """
    if a <= 0 or b <= 0:
        raise ValueError("ext_gcd_canonical needs positive arguments")
    x0, x1 = 1, 0
    r0, r1 = a, b
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        x0, x1 = x1, x0 - q * x1
    g = r0
    m = b // g
    x = x0 % m
    if 2 * x > m:
        x -= m
    y = (g - a * x) // b
    return g, x, y


@dataclass(frozen=True)
class BezoutPair:
    """Coefficients with ``k^2*g + l^2*h == target`` and the unsigned form
    ``k^2*u - l^2*v == sign*target``."""

    g: int
    h: int
    u: int
    v: int
    sign: int
    target: int


def bezout_squares(k: int, l: int, target: int = 1) -> BezoutPair:
    if target not in (1, 4):
        raise ValueError("target must be 1 or 4")
    if k <= 0 or l <= 0:
        raise ValueError("k and l must be positive")
    kk, ll = k * k, l * l
    g0, x, y = ext_gcd_canonical(kk, ll)
    if target % g0:
        raise NotSolvable(f"gcd({kk}, {ll}) = {g0} does not divide {target}")
    s = target // g0
    g, h = x * s, y * s
    u, v = abs(g), abs(h)
    sign = 1 if (g >= 0 and h <= 0) else -1
    if kk * u - ll * v != sign * target:
        raise NotSolvable(f"no opposite-sign Bezout pair for k={k}, l={l}")
    return BezoutPair(g, h, u, v, sign, target)


# ---------------------------------------------------------------------------
# Roots
# ---------------------------------------------------------------------------

def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = isqrt(n)
    return r * r == n


def iroot(n: int, e: int) -> int:
    """Floor of the e-th root of a non-negative integer."""
    if n < 2:
        return n
    r = 1 << ((n.bit_length() + e - 1) // e)
    while True:
        s = ((e - 1) * r + n // r ** (e - 1)) // e
        if s >= r:
            break
        r = s
    while r**e > n:
        r -= 1
    while (r + 1) ** e <= n:
        r += 1
    return r


def perfect_power(n: int) -> tuple[int, int] | None:
    """Return ``(r, e)`` with ``r**e == n`` and ``e >= 2`` maximal-root form, or None."""
    if n < 4:
        return None
    for e in primes_up_to(n.bit_length()):
        r = iroot(n, e)
        if r**e == n:
            deeper = perfect_power(r)
            if deeper:
                return deeper[0], deeper[1] * e
            return r, e
    return None


# ---------------------------------------------------------------------------
# Primes
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def _sieve(limit: int) -> tuple[int, ...]:
    if limit < 2:
        return ()
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, limit + 1, p)))
    return tuple(i for i, f in enumerate(flags) if f)


def primes_up_to(limit: int) -> tuple[int, ...]:
    """All primes ``p <= limit`` (cached)."""
    # round the cache key up so nearby limits share one sieve
    size = 1 << max(limit, 1).bit_length()
    ps = _sieve(size)
    if limit >= size:
        return ps
    hi = np.searchsorted(np.asarray(ps, dtype=np.int64), limit, side="right") if ps else 0
    return ps[:hi]


def _mr_round(n: int, d: int, s: int, a: int) -> bool:
    x = pow(a, d, n)
    if x in (1, n - 1):
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_probable_prime(n: int, rounds: int = 24) -> bool:
    """Miller-Rabin.  Exact for ``n < 3.3e24``; above that ``rounds`` extra
    bases drawn from an input-seeded generator."""
    if n < 2:
        return False
    for p in _MR_EXACT_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if not all(_mr_round(n, d, s, a) for a in _MR_EXACT_BASES):
        return False
    if n < _MR_EXACT_LIMIT:
        return True
    rng = random.Random(n)
    return all(_mr_round(n, d, s, rng.randrange(2, n - 1)) for _ in range(rounds))


# ---------------------------------------------------------------------------
# Factoring
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Effort:
    """Factoring budget.

    ``trial_bound`` caps trial division for inputs above the deterministic
    limit; ``rho_rounds`` * ``rho_iterations`` caps Pollard-Brent work on each
    unresolved cofactor.  ``seed`` perturbs the rho constants only.
    """

    name: str
    trial_bound: int
    rho_rounds: int
    rho_iterations: int
    seed: int = 0

    def with_seed(self, seed: int) -> "Effort":
        return Effort(self.name, self.trial_bound, self.rho_rounds, self.rho_iterations, seed)


FAST = Effort("fast", 10**5, 4, 20_000)
FULL = Effort("full", 10**6, 16, 200_000)
EFFORTS = {"fast": FAST, "full": FULL}


class PrimeFlag(enum.Enum):
    PRIME = "prime"
    PROBABLE_PRIME = "probable_prime"
    COMPOSITE = "composite"


@dataclass(frozen=True, order=True)
class Factor:
    value: int
    flag: PrimeFlag = field(compare=False)

    @property
    def resolved(self) -> bool:
        return self.flag is PrimeFlag.PRIME


def _brent(n: int, rng: random.Random, iterations: int) -> int | None:
    """One Pollard-Brent attempt; a proper divisor of n or None."""
    y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
    g = r = q = 1
    x = ys = y
    done = 0
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = gcd(q, n)
            k += m
        r <<= 1
        done += r
        if done > iterations:
            break
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = gcd(abs(x - ys), n)
    return g if 1 < g < n else None


def _prime_flag(n: int) -> PrimeFlag:
    if not is_probable_prime(n):
        return PrimeFlag.COMPOSITE
    return PrimeFlag.PRIME if n < _MR_EXACT_LIMIT else PrimeFlag.PROBABLE_PRIME


def _split_cofactor(m: int, effort: Effort, out: list[Factor]) -> None:
    stack = [m]
    exhaustive = m < DETERMINISTIC_LIMIT
    while stack:
        c = stack.pop()
        if c == 1:
            continue
        flag = _prime_flag(c)
        if flag is not PrimeFlag.COMPOSITE:
            out.append(Factor(c, flag))
            continue
        pp = perfect_power(c)
        if pp:
            stack.extend([pp[0]] * pp[1])
            continue
        rng = random.Random(c ^ (effort.seed * 0x9E3779B97F4A7C15))
        d = None
        attempt = 0
        # below the deterministic limit rho is run until it splits
        while d is None and (exhaustive or attempt < effort.rho_rounds):
            d = _brent(c, rng, effort.rho_iterations)
            attempt += 1
        if d is None:
            out.append(Factor(c, PrimeFlag.COMPOSITE))
        else:
            stack.extend((d, c // d))


def factor(n: int, effort: Effort = FULL) -> list[Factor]:
    """Factor ``n`` as far as ``effort`` allows.

    The product of the returned values is always ``n``.  Below
    ``DETERMINISTIC_LIMIT`` the result is the complete prime factorization.
    """
    if n < 1:
        raise ValueError("factor needs n >= 1")
    out: list[Factor] = []
    bound = 1000 if n < DETERMINISTIC_LIMIT else effort.trial_bound
    m = n
    for p in primes_up_to(bound):
        if p * p > m:
            break
        while m % p == 0:
            out.append(Factor(p, PrimeFlag.PRIME))
            m //= p
    if m > 1:
        _split_cofactor(m, effort, out)
    out.sort()
    assert prod(f.value for f in out) == n
    return out


# ---------------------------------------------------------------------------
# Squarefree
# ---------------------------------------------------------------------------

class SquarefreeStatus(enum.Enum):
    SQUAREFREE = "Squarefree"
    NOT_SQUAREFREE = "NotSquarefree"
    PROBABLY_SQUAREFREE = "ProbablySquarefree"


@dataclass(frozen=True)
class SquarefreeVerdict:
    status: SquarefreeStatus
    effort: str
    witness: int | None = None  # w > 1 with w*w | n

    def __bool__(self) -> bool:
        # probable counts as squarefree for the generators; callers that care
        # inspect ``status``
        return self.status is not SquarefreeStatus.NOT_SQUAREFREE

    @property
    def certified(self) -> bool:
        return self.status is SquarefreeStatus.SQUAREFREE


def is_squarefree(n: int, effort: Effort = FULL) -> SquarefreeVerdict:
    if n < 1:
        raise ValueError("is_squarefree needs n >= 1")
    tier = "deterministic" if n < DETERMINISTIC_LIMIT else effort.name
    parts = factor(n, effort)
    seen: set[int] = set()
    for f in parts:
        if f.value in seen:
            return SquarefreeVerdict(SquarefreeStatus.NOT_SQUAREFREE, tier, f.value)
        seen.add(f.value)
    open_parts = [f.value for f in parts if f.flag is PrimeFlag.COMPOSITE]
    for i, c in enumerate(open_parts):
        for other in [f.value for f in parts if f.value != c] + open_parts[i + 1 :]:
            g = gcd(c, other)
            if g > 1:
                return SquarefreeVerdict(SquarefreeStatus.NOT_SQUAREFREE, tier, g)
    if all(f.resolved for f in parts):
        return SquarefreeVerdict(SquarefreeStatus.SQUAREFREE, tier)
    return SquarefreeVerdict(SquarefreeStatus.PROBABLY_SQUAREFREE, tier)


_MASK_LIMIT = 2**62


def squarefree_mask(values: np.ndarray) -> np.ndarray:
    """Vectorized exact squarefree test for positive int64 values < 2**62.

    Trial division by every prime up to the cube root of the largest value;
    what survives has at most two prime factors, so it is squarefree unless it
    is a perfect square.
    """
    vals = np.asarray(values, dtype=np.int64)
    if vals.size == 0:
        return np.zeros(0, dtype=bool)
    top = int(vals.max())
    if int(vals.min()) < 1 or top >= _MASK_LIMIT:
        raise ValueError("squarefree_mask handles 1 <= n < 2**62")
    cof = vals.copy()
    ok = np.ones(vals.shape, dtype=bool)
    for p in primes_up_to(iroot(top, 3) + 1):
        hit = cof % p == 0
        if not hit.any():
            continue
        ok &= ~(hit & (cof % (p * p) == 0))
        cof[hit] //= p
    r = np.floor(np.sqrt(cof.astype(np.float64))).astype(np.int64)
    for adj in (-1, 0, 1):
        s = r + adj
        ok &= ~((cof > 1) & (s * s == cof))
    return ok
