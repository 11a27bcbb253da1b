"""Real quadratic fields, their integers and primitive ideals, and the exact
planar geometry of the embedding ``alpha -> (sigma1(alpha), sigma2(alpha))``.

Elements are stored in the integral basis ``{1, delta}``.  Internally most
computations use the "half" coordinates ``(X, Y)`` with
``alpha = (X + Y*sqrt(disc)) / 2``, which are integral for every element of
the maximal order and make norms and Gram entries one-liners.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Protocol

from .arith import SquarefreeStatus, is_squarefree, isqrt
from .errors import DegenerateBasis, DLessThan2, NotAnIdeal, NotSquarefree

AngleCos = Fraction


class DeltaKind(enum.Enum):
    SQRT = "Sqrt"  # delta = sqrt(d), d = 2, 3 mod 4
    HALF_ONE_PLUS_SQRT = "HalfOnePlusSqrt"  # delta = (1 + sqrt(d))/2, d = 1 mod 4


@dataclass(frozen=True)
class QuadField:
    d: int
    disc: int
    delta_kind: DeltaKind

    @property
    def isqrt_disc(self) -> int:
        return isqrt(self.disc)

    def __str__(self) -> str:
        return f"Q(sqrt({self.d}))"


def make_field(d: int) -> QuadField:
    if d < 2:
        raise DLessThan2(f"d must be > 1, got {d}")
    verdict = is_squarefree(d)
    if verdict.status is SquarefreeStatus.NOT_SQUAREFREE:
        raise NotSquarefree(f"{d} is divisible by {verdict.witness}^2")
    if d % 4 == 1:
        return QuadField(d, d, DeltaKind.HALF_ONE_PLUS_SQRT)
    return QuadField(d, 4 * d, DeltaKind.SQRT)


@dataclass(frozen=True)
class QuadInt:
    """``x + y*delta`` in the ring of integers of ``field``."""

    x: int
    y: int
    field: QuadField

    @classmethod
    def from_half(cls, field: QuadField, X: int, Y: int) -> "QuadInt":
        """Build ``(X + Y*sqrt(disc))/2``; raises ValueError if not integral."""
        if field.delta_kind is DeltaKind.SQRT:
            if X % 2:
                raise ValueError("not an algebraic integer")
            return cls(X // 2, Y, field)
        if (X - Y) % 2:
            raise ValueError("not an algebraic integer")
        return cls((X - Y) // 2, Y, field)

    @classmethod
    def from_sqrt_d(cls, field: QuadField, num_rational: int, num_sqrt: int, den: int = 1) -> "QuadInt":
        """Build ``(num_rational + num_sqrt*sqrt(d)) / den`` with den in {1, 2}."""
        if den == 1:
            X, Y2 = 2 * num_rational, 2 * num_sqrt
        elif den == 2:
            X, Y2 = num_rational, num_sqrt
        else:
            raise ValueError("den must be 1 or 2")
        # sqrt(disc) = 2 sqrt(d) when disc = 4d
        if field.delta_kind is DeltaKind.SQRT:
            if Y2 % 2:
                raise ValueError("not an algebraic integer")
            return cls.from_half(field, X, Y2 // 2)
        return cls.from_half(field, X, Y2)

    @property
    def half(self) -> tuple[int, int]:
        if self.field.delta_kind is DeltaKind.SQRT:
            return 2 * self.x, self.y
        return 2 * self.x + self.y, self.y

    def norm(self) -> int:
        X, Y = self.half
        return (X * X - Y * Y * self.field.disc) // 4

    def trace(self) -> int:
        return self.half[0]

    def conj(self) -> "QuadInt":
        X, Y = self.half
        return QuadInt.from_half(self.field, X, -Y)

    def embed(self) -> tuple[float, float]:
        """Floating approximation of ``(sigma1, sigma2)``; display only."""
        X, Y = self.half
        s = math.sqrt(self.field.disc)
        return (X + Y * s) / 2, (X - Y * s) / 2

    def __add__(self, other: "QuadInt") -> "QuadInt":
        return QuadInt(self.x + other.x, self.y + other.y, self.field)

    def __sub__(self, other: "QuadInt") -> "QuadInt":
        return QuadInt(self.x - other.x, self.y - other.y, self.field)

    def __neg__(self) -> "QuadInt":
        return QuadInt(-self.x, -self.y, self.field)

    def __mul__(self, other):
        if isinstance(other, int):
            return QuadInt(self.x * other, self.y * other, self.field)
        X1, Y1 = self.half
        X2, Y2 = other.half
        D = self.field.disc
        # ((X1 + Y1 s)(X2 + Y2 s))/4 = ((X1X2 + Y1Y2 D)/2 + (X1Y2 + X2Y1)/2 s)/2
        return QuadInt.from_half(self.field, (X1 * X2 + Y1 * Y2 * D) // 2, (X1 * Y2 + X2 * Y1) // 2)

    __rmul__ = __mul__

    def __str__(self) -> str:
        X, Y = self.half
        d = self.field.d
        if self.field.delta_kind is DeltaKind.SQRT:
            a, b, den = X // 2, Y, 1
        else:
            a, b, den = X, Y, 2
        sign = "-" if b < 0 else "+"
        body = f"{a} {sign} {abs(b)}*sqrt({d})"
        return f"({body})/2" if den == 2 else body

    def to_json(self) -> dict[str, str]:
        return {"x": str(self.x), "y": str(self.y)}


# ---------------------------------------------------------------------------
# Ideals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IdealRep:
    """``< m*a, m*(b + sqrt(disc))/2 >_Z`` in canonical form."""

    field: QuadField
    m: int
    a: int
    b: int

    @property
    def norm(self) -> int:
        return self.m * self.a

    @property
    def primitive(self) -> bool:
        return self.m == 1

    def basis(self) -> tuple[QuadInt, QuadInt]:
        F = self.field
        return (
            QuadInt.from_half(F, 2 * self.m * self.a, 0),
            QuadInt.from_half(F, self.m * self.b, self.m),
        )

    def contains(self, e: QuadInt) -> bool:
        X, Y = e.half
        if Y % self.m:
            return False
        t = Y // self.m
        # e = s*m*a + t*m*(b + sqrt)/2  <=>  X = 2 s m a + t m b
        rest = X - t * self.m * self.b
        return rest % (2 * self.m * self.a) == 0

    def contains_ideal(self, other: "IdealRep") -> bool:
        return all(self.contains(e) for e in other.basis())

    def to_json(self) -> dict[str, str]:
        return {"d": str(self.field.d), "m": str(self.m), "a": str(self.a), "b": str(self.b)}

    def __str__(self) -> str:
        X = f"({self.b} + sqrt({self.field.disc}))/2"
        return f"<{self.m * self.a}, {self.m}*{X}>" if self.m != 1 else f"<{self.a}, {X}>"


def canonical_ideal(field: QuadField, a: int, b: int, m: int = 1) -> IdealRep:
    if a <= 0 or m <= 0:
        raise NotAnIdeal("a and m must be positive")
    D = field.disc
    if (D - b * b) % (4 * a):
        raise NotAnIdeal(f"4*{a} does not divide {D} - {b}^2")
    r = field.isqrt_disc  # sqrt(D) is irrational, so a != sqrt(D)
    if a > r:
        # -a < b <= a
        b = (b + a - 1) % (2 * a) - a + 1
    else:
        # sqrt(D) - 2a < b < sqrt(D): the largest b' = b mod 2a with b' <= r
        b = b + 2 * a * ((r - b) // (2 * a))
    return IdealRep(field, m, a, b)


def unit_ideal(field: QuadField) -> IdealRep:
    return canonical_ideal(field, 1, field.disc % 2)


# ---------------------------------------------------------------------------
# Geometry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Gram:
    """Exact Gram data of ``Lambda(e1), Lambda(e2)``."""

    n11: Fraction
    n22: Fraction
    n12: Fraction

    @property
    def det(self) -> Fraction:
        return self.n11 * self.n22 - self.n12 * self.n12


def sq_length(e: QuadInt) -> Fraction:
    """``sigma1(e)^2 + sigma2(e)^2``."""
    X, Y = e.half
    return Fraction(X * X + Y * Y * e.field.disc, 2)


def dot(e: QuadInt, f: QuadInt) -> Fraction:
    X1, Y1 = e.half
    X2, Y2 = f.half
    return Fraction(X1 * X2 + Y1 * Y2 * e.field.disc, 2)


def embed_gram(basis: tuple[QuadInt, QuadInt]) -> Gram:
    e1, e2 = basis
    g = Gram(sq_length(e1), sq_length(e2), dot(e1, e2))
    if g.det == 0:
        raise DegenerateBasis("basis elements are linearly dependent")
    return g


def _round_half_up(q: Fraction) -> int:
    return math.floor(q + Fraction(1, 2))


def shortest_vector_oracle(basis: tuple[QuadInt, QuadInt]) -> tuple[Fraction, tuple[QuadInt, QuadInt]]:
    """Lagrange-Gauss reduction on exact Gram data.

    Returns the lattice minimum and a reduced basis ``(b1, b2)`` with
    ``|b1| <= |b2|`` and ``|2 <b1, b2>| <= |b1|^2``.
    """
    embed_gram(basis)  # raises DegenerateBasis
    b1, b2 = basis
    n1, n2 = sq_length(b1), sq_length(b2)
    if n1 > n2:
        b1, b2, n1, n2 = b2, b1, n2, n1
    while True:
        mu = _round_half_up(dot(b1, b2) / n1)
        if mu:
            b2 = b2 - b1 * mu
            n2 = sq_length(b2)
        if n2 >= n1:
            return n1, (b1, b2)
        b1, b2, n1, n2 = b2, b1, n2, n1


def lattice_angle_cos(basis: tuple[QuadInt, QuadInt]) -> AngleCos | None:
    """Cosine of the lattice angle (in [pi/3, pi/2]) for a WR lattice; None
    when the lattice is not well rounded."""
    _, (b1, b2) = shortest_vector_oracle(basis)
    n1, n2 = sq_length(b1), sq_length(b2)
    if n1 != n2:
        return None
    return abs(dot(b1, b2)) / n1


class _HasSplit(Protocol):
    d1: int
    d2: int


def angle_cos(pair: _HasSplit) -> AngleCos:
    return Fraction(pair.d2 - pair.d1, pair.d2 + pair.d1)


def is_similar(p1: _HasSplit, p2: _HasSplit) -> bool:
    return angle_cos(p1) == angle_cos(p2)


def is_hexagonal(pair: _HasSplit) -> bool:
    return angle_cos(pair) == Fraction(1, 2)
