"""Fundamental units, search bounds, generalized Pell equations
``k^2 d2 - l^2 d1 = t`` and an independent principality test that walks the
cycle of reduced ideals.

The Pell solver and the cycle walk deliberately share no code: the solver
works with the quadratic form ``d2 X^2 - d1 Y^2`` (scan, or convergents of
``sqrt(d1/d2)``), the cycle walk with the ideal's own quadratic irrational
``(b + sqrt(disc)) / 2a``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt

from .arith import is_square
from .errors import PeriodBudgetExceeded
from .quadfield import IdealRep, QuadField, QuadInt
from .wrideal import PwrPair, split_candidates

DEFAULT_MAX_DISC = 10**14
SCAN_LIMIT = 4096


@dataclass(frozen=True)
class PellSolution:
    k: int
    l: int
    t: int

    def check(self, d1: int, d2: int) -> bool:
        return self.k * self.k * d2 - self.l * self.l * d1 == self.t

    def to_json(self) -> dict[str, str]:
        return {"k": str(self.k), "l": str(self.l), "t": str(self.t)}


@dataclass(frozen=True)
class FundamentalUnit:
    unit: QuadInt
    unit_norm: int
    period: int

    @property
    def x(self) -> int:
        return self.unit.x

    @property
    def y(self) -> int:
        return self.unit.y

    @property
    def field(self) -> QuadField:
        return self.unit.field


@dataclass(frozen=True)
class CycleState:
    """The quadratic irrational ``(P + sqrt(disc)) / Q``."""

    P: int
    Q: int

    def step(self, disc: int, r: int) -> tuple[int, "CycleState"]:
        """Partial quotient and next complete quotient; ``r = isqrt(disc)``."""
        P, Q = self.P, self.Q
        # floor((P + sqrt(disc))/Q) for irrational sqrt(disc), either sign of Q
        a = (P + r + (1 if Q < 0 else 0)) // Q
        P1 = a * Q - P
        return a, CycleState(P1, (disc - P1 * P1) // Q)

    def is_reduced(self, r: int) -> bool:
        P, Q = self.P, self.Q
        return Q > 0 and P <= r and P + Q > r and P + r >= Q


def _default_budget(disc: int) -> int:
    return 4 * isqrt(disc) * max(disc.bit_length(), 1) + 64


def fundamental_unit(
    field: QuadField,
    max_disc: int = DEFAULT_MAX_DISC,
    max_steps: int | None = None,
) -> FundamentalUnit:
    """Smallest unit > 1 from one period of the continued fraction of delta."""
    D = field.disc
    if D > max_disc:
        raise PeriodBudgetExceeded(f"discriminant {D} above tractability bound {max_disc}")
    budget = max_steps if max_steps is not None else _default_budget(D)
    r = isqrt(D)
    P0 = D % 2
    state = CycleState(P0, 2)
    p, p_prev = 1, 0
    q, q_prev = 0, 1
    i = 0
    while True:
        a, state = state.step(D, r)
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
        i += 1
        if state.Q == 2:
            break
        if i > budget:
            raise PeriodBudgetExceeded(f"period of {field} exceeds {budget} steps")
    # eps = p - q * conj(omega), conj(omega) = (P0 - sqrt D)/2
    eps = QuadInt.from_half(field, 2 * p - q * P0, q)
    n = eps.norm()
    if abs(n) != 1 or n != (-1) ** i:
        raise AssertionError(f"bad unit {eps} of norm {n} for {field}")
    return FundamentalUnit(eps, n, i)


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------

def _bound(eps: FundamentalUnit, c: int) -> int:
    """Largest K with K <= (sqrt(eps) + 1/sqrt(eps)) / sqrt(c), exactly.

    (sqrt(eps) + 1/sqrt(eps))^2 = eps + 1/eps + 2, and eps + 1/eps is the
    trace X when N(eps) = 1, and Y*sqrt(disc) when N(eps) = -1.
    """
    X, Y = eps.unit.half
    if eps.unit_norm == 1:
        W = X
    else:
        # K^2 c - 2 <= Y sqrt(D) <=> K^2 c - 2 <= floor(Y sqrt(D))
        W = isqrt(Y * Y * eps.field.disc)
    return isqrt((W + 2) // c)


def pell_bounds(pair: PwrPair, eps: FundamentalUnit) -> tuple[int, int]:
    """``(k_max, l_max)``: every solvable instance has a witness inside."""
    s = 2 if pair.mod4 == 3 else 1
    return _bound(eps, s * pair.d2), _bound(eps, s * pair.d1)


def pell_bounds_from_unit_size(pair: PwrPair, unit_upper: float) -> tuple[float, float]:
    """The same bounds from a real upper bound on the unit (floating point,
    for reporting only)."""
    s = 2 if pair.mod4 == 3 else 1
    w = unit_upper**0.5 + unit_upper**-0.5
    return w / (s * pair.d2) ** 0.5, w / (s * pair.d1) ** 0.5


# ---------------------------------------------------------------------------
# solving
# ---------------------------------------------------------------------------

def _targets(pair: PwrPair) -> tuple[int, int]:
    T = pair.pell_rhs
    return T, -T


def _scan(pair: PwrPair, k_max: int) -> PellSolution | None:
    d1, d2 = pair.d1, pair.d2
    for k in range(1, k_max + 1):
        kk = k * k * d2
        for t in _targets(pair):
            num = kk - t
            if num > 0 and num % d1 == 0 and is_square(num // d1):
                return PellSolution(k, isqrt(num // d1), t)
    return None


def _legendre_applies(pair: PwrPair) -> bool:
    # every coprime solution of d2 X^2 - d1 Y^2 = s with |s| <= T has
    # |X/Y - sqrt(d1/d2)| < 1/(2Y^2) when d1 >= T and d > 4T^2
    T = pair.pell_rhs
    return pair.d1 >= T and pair.d > 4 * T * T


def _convergent_search(pair: PwrPair, k_max: int) -> PellSolution | None:
    """Minimal-k witness via the convergents of sqrt(d1/d2) = sqrt(d)/d2.

    Coprime solutions are convergents (Legendre).  For |t| = 4 a solution
    with gcd 2 is twice a solution of ``= +-1``, also a convergent.
    """
    d1, d2, d = pair.d1, pair.d2, pair.d
    T = pair.pell_rhs
    r = isqrt(d)
    P, Q = 0, d2
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    best: tuple[int, int, PellSolution] | None = None
    while True:
        a = (P + r) // Q
        P = a * Q - P
        Q = (d - P * P) // Q
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
        if p > k_max or (best is not None and p > best[0]):
            break
        if p == 0:
            continue
        val = d2 * p * p - d1 * q * q
        found = []
        if abs(val) == T:
            found.append(PellSolution(p, q, val))
        if T == 4 and abs(val) == 1 and 2 * p <= k_max:
            found.append(PellSolution(2 * p, 2 * q, 4 * val))
        for sol in found:
            key = (sol.k, 0 if sol.t > 0 else 1, sol)
            if best is None or key[:2] < best[:2]:
                best = key
    return best[2] if best else None


def solve_gpell(pair: PwrPair, k_max: int, method: str = "auto") -> PellSolution | None:
    """First witness ``(k, l, t)`` with ``1 <= k <= k_max``, ordered by k then
    ``t > 0`` before ``t < 0``; None if there is none in range."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    if method == "auto":
        method = "scan" if k_max <= SCAN_LIMIT or not _legendre_applies(pair) else "convergents"
    if method == "scan":
        sol = _scan(pair, k_max)
    elif method == "convergents":
        if not _legendre_applies(pair):
            raise ValueError(f"convergent search not valid for {pair.d1}, {pair.d2}")
        sol = _convergent_search(pair, k_max)
    else:
        raise ValueError(f"unknown method {method!r}")
    if sol is not None and not sol.check(pair.d1, pair.d2):
        raise AssertionError(f"bad witness {sol}")
    return sol


def solve_pair(pair: PwrPair, eps: FundamentalUnit | None = None, **unit_kw) -> PellSolution | None:
    """Decide the Pell equation of ``pair`` using the unit-derived bound."""
    if eps is None:
        eps = fundamental_unit(pair.field, **unit_kw)
    k_max, _ = pell_bounds(pair, eps)
    if k_max < 1:
        return None
    return solve_gpell(pair, k_max)


# ---------------------------------------------------------------------------
# principality by the reduced cycle
# ---------------------------------------------------------------------------

def is_principal_cycle(ideal: IdealRep, max_steps: int | None = None) -> bool:
    """True iff the cycle of reduced ideals equivalent to ``ideal`` contains
    the unit ideal."""
    if not ideal.primitive:
        raise ValueError("primitive ideals only")
    D = ideal.field.disc
    if D > DEFAULT_MAX_DISC:
        raise PeriodBudgetExceeded(f"discriminant {D} above tractability bound")
    budget = max_steps if max_steps is not None else _default_budget(D) + 4 * ideal.a.bit_length()
    r = isqrt(D)
    state = CycleState(ideal.b, 2 * ideal.a)
    first_reduced: CycleState | None = None
    for _ in range(budget):
        if abs(state.Q) == 2:
            return True
        if first_reduced is None and state.is_reduced(r):
            first_reduced = state
        _, state = state.step(D, r)
        if state == first_reduced:
            return False
    raise PeriodBudgetExceeded(f"cycle walk exceeded {budget} steps")


# ---------------------------------------------------------------------------
# the decision
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PwrDecision:
    d: int
    has_pwr: bool
    pair: PwrPair | None = None
    solution: PellSolution | None = None
    candidates: tuple[PwrPair, ...] = field(default=())

    def to_json(self) -> dict:
        out: dict = {"d": str(self.d), "has_pwr": self.has_pwr}
        out["candidates"] = [[str(p.d1), str(p.d2)] for p in self.candidates]
        if self.pair is not None:
            out["d1"], out["d2"] = str(self.pair.d1), str(self.pair.d2)
        out["solution"] = self.solution.to_json() if self.solution else None
        return out


def has_pwr(d: int, **unit_kw) -> PwrDecision:
    """Whether Q(sqrt d), d odd squarefree, has PWR ideals, with a witness."""
    cands = tuple(split_candidates(d))
    if not cands:
        return PwrDecision(d, False)
    eps = fundamental_unit(cands[0].field, **unit_kw)
    for pair in cands:
        sol = solve_pair(pair, eps)
        if sol is not None:
            return PwrDecision(d, True, pair, sol, cands)
    return PwrDecision(d, False, candidates=cands)
