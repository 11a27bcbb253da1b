"""Batch experiments: family scan statistics, exhaustive scatter data, the
big-integer demo, and a full audit of a field's PWR structure."""
from __future__ import annotations

import csv
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import IO, Iterable, Iterator

import numpy as np

from .arith import FAST, Effort, is_squarefree, squarefree_mask
from .errors import BudgetExhausted, InvariantViolation, SinkFailure
from .generate import (
    DEFAULT_N_MAX,
    GenClass,
    GenTuple,
    alg1,
    alg2,
    family_base,
    generate,
    valid_ls,
)
from .pell import PellSolution, fundamental_unit, is_principal_cycle, solve_pair
from .quadfield import angle_cos, lattice_angle_cos
from .wrideal import (
    PwrPair,
    build_pwr_ideals,
    generator_from_pell,
    in_wr_window,
    make_pair,
    minimal_basis,
    split_candidates,
)

CSV_HEADER = ("d1", "d2", "k", "l", "t")


# ---------------------------------------------------------------------------
# scan statistics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScanStats:
    k_max: int
    cls: GenClass
    total: int
    histogram: dict[int, int]

    @property
    def max_n(self) -> int:
        return max(self.histogram, default=-1)

    def fraction(self, n: int) -> Fraction:
        return Fraction(self.histogram.get(n, 0), self.total) if self.total else Fraction(0)

    @property
    def fraction_n0(self) -> Fraction:
        return self.fraction(0)

    @property
    def fraction_n1(self) -> Fraction:
        return self.fraction(1)

    def to_json(self) -> dict:
        return {
            "k_max": self.k_max,
            "class": self.cls.value,
            "total": self.total,
            "histogram": {str(n): c for n, c in sorted(self.histogram.items())},
            "fraction_n0": float(self.fraction_n0),
            "fraction_n1": float(self.fraction_n1),
            "max_n": self.max_n,
        }


def scan_ks(k_max: int, cls: GenClass) -> range:
    return range(4 if cls is GenClass.MOD1_EVEN else 3, k_max, 2)


def _scan_shard(args: tuple[list[int], str, int]) -> tuple[int, dict[int, int]]:
    ks, cls_value, n_max = args
    cls = GenClass(cls_value)
    b1, b2, s1, s2 = [], [], [], []
    for k in ks:
        for l in valid_ls(k, cls):
            _, (x1, x2), (y1, y2) = family_base(k, l, cls)
            b1.append(x1)
            b2.append(x2)
            s1.append(y1)
            s2.append(y2)
    total = len(b1)
    if not total:
        return 0, {}
    B1, B2 = np.array(b1, dtype=np.int64), np.array(b2, dtype=np.int64)
    S1, S2 = np.array(s1, dtype=np.int64), np.array(s2, dtype=np.int64)
    pending = np.arange(total)
    hist: dict[int, int] = {}
    for n in range(n_max + 1):
        if not pending.size:
            break
        d1 = B1[pending] + S1[pending] * n
        d2 = B2[pending] + S2[pending] * n
        ok = squarefree_mask(d1) & squarefree_mask(d2)
        if ok.any():
            hist[n] = int(ok.sum())
        pending = pending[~ok]
    if pending.size:
        raise BudgetExhausted(f"{pending.size} pairs need n > {n_max}")
    return total, hist


def scan_stats(
    k_max: int,
    cls: GenClass,
    workers: int = 1,
    n_max: int = DEFAULT_N_MAX,
) -> ScanStats:
    """First squarefree index n for every valid (k, l) with k < k_max."""
    if k_max < 3:
        raise ValueError("k_max must be >= 3")
    ks = list(scan_ks(k_max, cls))
    # round-robin shards balance the growing number of l per k
    shards = max(1, workers) * 4 if workers > 1 else 1
    jobs = [(ks[i::shards], cls.value, n_max) for i in range(shards)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_scan_shard, jobs))
    else:
        results = [_scan_shard(j) for j in jobs]
    total = sum(r[0] for r in results)
    hist: Counter[int] = Counter()
    for _, h in results:
        hist.update(h)
    if sum(hist.values()) != total:
        raise InvariantViolation("histogram does not sum to total")
    return ScanStats(k_max, cls, total, dict(sorted(hist.items())))


def scan_stats_reference(k_max: int, cls: GenClass, n_max: int = DEFAULT_N_MAX) -> ScanStats:
    """Slow recount through the scalar generators (test oracle)."""
    hist: Counter[int] = Counter()
    for k in scan_ks(k_max, cls):
        for l in valid_ls(k, cls):
            hist[generate(k, l, cls, n_max).n] += 1
    return ScanStats(k_max, cls, sum(hist.values()), dict(sorted(hist.items())))


# ---------------------------------------------------------------------------
# scatter data
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class ScatterRow:
    d1: int
    d2: int
    k: int
    l: int
    t: int

    def check(self) -> None:
        if self.k * self.k * self.d2 - self.l * self.l * self.d1 != self.t:
            raise InvariantViolation(f"Pell identity fails for {self}")
        if not self.d1 < self.d2 <= 3 * self.d1:
            raise InvariantViolation(f"window fails for {self}")
        if not is_squarefree(self.d1 * self.d2):
            raise InvariantViolation(f"d1*d2 not squarefree for {self}")

    def as_csv(self) -> tuple[str, ...]:
        return tuple(str(x) for x in (self.d1, self.d2, self.k, self.l, self.t))


@lru_cache(maxsize=None)
def _sqf(n: int) -> bool:
    return bool(is_squarefree(n))


def _pell_parity_ok(k: int, l: int, cls: GenClass) -> bool:
    if cls is GenClass.MOD1_EVEN:
        return k % 2 == 0 and l % 2 == 0
    return k % 2 == 1 and l % 2 == 1


def scatter_rows(d1_max: int, kl_max: int, cls: GenClass) -> Iterator[ScatterRow]:
    """Every (d1, d2, k, l, t) with d1 < d1_max, k <= l < kl_max satisfying
    the class's Pell identity, the window, d = residue mod 4 and
    squarefreeness, sorted."""
    rows = []
    T = cls.pell_rhs
    for k in range(1, kl_max):
        kk = k * k
        # l^2 d1 <= 3 k^2 d1 + |t| forces l^2 <= 3 k^2 + T
        for l in range(k, min(kl_max, isqrt(3 * kk + T) + 1)):
            if not _pell_parity_ok(k, l, cls):
                continue
            ll = l * l
            g = gcd(kk, ll)
            M = kk // g
            for t in (T, -T):
                if t % g:
                    continue
                # l^2 d1 = -t (mod k^2)
                r = (-t // g) * pow(ll // g, -1, M) % M if M > 1 else 0
                for d1 in range(r if r > 0 else M, d1_max, M):
                    num = t + ll * d1
                    if num <= 0 or num % kk:
                        continue
                    d2 = num // kk
                    if not d1 < d2 <= 3 * d1:
                        continue
                    if d2 == 3 * d1 and (d1, d2) != (1, 3):
                        continue
                    if (d1 * d2) % 4 != cls.residue:
                        continue
                    if gcd(d1, d2) != 1 or not _sqf(d1) or not _sqf(d2):
                        continue
                    rows.append(ScatterRow(d1, d2, k, l, t))
    rows.sort()
    return iter(rows)


def scatter_export(d1_max: int, kl_max: int, cls: GenClass, sink: IO[str]) -> int:
    if d1_max < 1 or kl_max < 1:
        raise ValueError("bounds must be >= 1")
    try:
        w = csv.writer(sink, lineterminator="\n")
        w.writerow(CSV_HEADER)
        count = 0
        for row in scatter_rows(d1_max, kl_max, cls):
            row.check()  # write barrier
            w.writerow(row.as_csv())
            count += 1
        sink.flush()
    except OSError as exc:
        raise SinkFailure(str(exc)) from exc
    return count


def read_scatter(lines: Iterable[str]) -> list[ScatterRow]:
    reader = csv.reader(lines)
    header = next(reader)
    if tuple(header) != CSV_HEADER:
        raise ValueError(f"unexpected header {header}")
    return [ScatterRow(*(int(x) for x in rec)) for rec in reader]


# ---------------------------------------------------------------------------
# big demo
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BigDemo:
    digits: int
    mod3: GenTuple
    mod1: GenTuple
    seconds_mod3: float
    seconds_mod1: float

    def to_json(self) -> dict:
        return {
            "digits": self.digits,
            "mod3": {**self.mod3.to_json(), "seconds": self.seconds_mod3, "d2_minus_d1": str(self.mod3.d2 - self.mod3.d1)},
            "mod1": {**self.mod1.to_json(), "seconds": self.seconds_mod1, "d2_minus_d1": str(self.mod1.d2 - self.mod1.d1)},
        }


def bigdemo(digits: int, effort: Effort = FAST, n_max: int = DEFAULT_N_MAX) -> BigDemo:
    if digits < 10:
        raise ValueError("digits must be >= 10")
    k = 10**digits - 1
    t0 = time.perf_counter()
    a = alg1(k, k + 2, n_max, effort)
    t1 = time.perf_counter()
    b = alg2(k, k + 2, n_max, effort)
    t2 = time.perf_counter()
    return BigDemo(digits, a, b, t1 - t0, t2 - t1)


# ---------------------------------------------------------------------------
# audit
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PairAudit:
    pair: PwrPair
    solution: PellSolution | None
    principal: tuple[bool, bool]
    minima: tuple[Fraction, Fraction]
    angle_cos: Fraction
    generator: str | None

    @property
    def is_pwr(self) -> bool:
        return self.solution is not None

    def to_json(self) -> dict:
        return {
            "d1": str(self.pair.d1),
            "d2": str(self.pair.d2),
            "pwr": self.is_pwr,
            "solution": self.solution.to_json() if self.solution else None,
            "principal_cycle": list(self.principal),
            "minima": [str(m) for m in self.minima],
            "angle_cos": str(self.angle_cos),
            "generator": self.generator,
        }


@dataclass(frozen=True)
class Audit:
    d: int
    pairs: tuple[PairAudit, ...] = field(default=())

    @property
    def has_pwr(self) -> bool:
        return any(p.is_pwr for p in self.pairs)

    def to_json(self) -> dict:
        return {"d": str(self.d), "has_pwr": self.has_pwr, "pairs": [p.to_json() for p in self.pairs]}


def audit_pair(pair: PwrPair, eps=None) -> PairAudit:
    """Check every link of the PWR criterion for one split; raise
    InvariantViolation on any disagreement."""
    eps = eps or fundamental_unit(pair.field)
    sol = solve_pair(pair, eps)
    I1, I2 = build_pwr_ideals(pair)
    disc = pair.field.disc
    for I in (I1, I2):
        if not in_wr_window(I.a, disc):
            raise InvariantViolation(f"{I} outside the WR window")
    p1, p2 = is_principal_cycle(I1), is_principal_cycle(I2)
    if p1 != p2 or p1 != (sol is not None):
        raise InvariantViolation(f"Pell says {sol}, cycle says {p1}, {p2} for {pair.d1}, {pair.d2}")
    minima = []
    for which, I in ((1, I1), (2, I2)):
        e1, e2, m = minimal_basis(pair, which)
        if not (I.contains(e1) and I.contains(e2)):
            raise InvariantViolation("minimal basis not in the ideal")
        minima.append(m)
    c = angle_cos(pair)
    if lattice_angle_cos(minimal_basis(pair, 1)[:2]) != c:
        raise InvariantViolation("angle mismatch")
    gen = str(generator_from_pell(pair, sol)) if sol else None
    return PairAudit(pair, sol, (p1, p2), (minima[0], minima[1]), c, gen)


def audit(d: int) -> Audit:
    cands = split_candidates(d)
    if not cands:
        return Audit(d)
    eps = fundamental_unit(cands[0].field)
    return Audit(d, tuple(audit_pair(p, eps) for p in cands))


def audit_split(d1: int, d2: int) -> PairAudit:
    return audit_pair(make_pair(d1, d2))


__all__ = [
    "Audit",
    "BigDemo",
    "CSV_HEADER",
    "PairAudit",
    "ScanStats",
    "ScatterRow",
    "audit",
    "audit_pair",
    "audit_split",
    "bigdemo",
    "read_scatter",
    "scan_stats",
    "scan_stats_reference",
    "scatter_export",
    "scatter_rows",
]
