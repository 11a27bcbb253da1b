"""``pwrideal`` command line.

Exit codes: 0 success, 2 invalid arguments, 3 budget exceeded, 4 internal
invariant violation.  Integers in JSON and CSV output are decimal strings.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Callable

from . import errors
from .arith import EFFORTS, FAST, FULL, Effort
from .experiments import audit, audit_split, bigdemo, scan_stats, scatter_export
from .generate import ALGORITHMS, GenClass, cf_density, prime_pwr_search
from .pell import fundamental_unit, is_principal_cycle, pell_bounds, solve_gpell
from .quadfield import canonical_ideal, make_field
from .wrideal import enumerate_wr, make_pair, write_wr_jsonl

EXIT_OK, EXIT_ARGS, EXIT_BUDGET, EXIT_INVARIANT = 0, 2, 3, 4

_ARG_ERRORS = (
    ValueError,
    errors.BadL,
    errors.NotSolvable,
    errors.NotSquarefree,
    errors.DLessThan2,
    errors.NotAnIdeal,
    errors.InvalidPair,
    errors.InvalidWitness,
    errors.NonPositive,
    errors.DegenerateBasis,
    errors.SinkFailure,
)
_BUDGET_ERRORS = (errors.BudgetExhausted, errors.PeriodBudgetExceeded, errors.FactorizationIncomplete)


def _effort(args: argparse.Namespace, default: Effort = FULL) -> Effort:
    e = EFFORTS[args.effort] if args.effort else default
    return e.with_seed(args.seed) if args.seed is not None else e


def _emit(args: argparse.Namespace, obj: dict, text: str) -> None:
    print(json.dumps(obj) if args.json else text)


def _cls(value: str) -> GenClass:
    return GenClass(value)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_gen(args) -> int:
    t = ALGORITHMS[args.cls](args.k, args.l, args.nmax, _effort(args))
    _emit(args, t.to_json(), f"k={t.k} l={t.l} n={t.n} d1={t.d1} d2={t.d2} t={t.t}")
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.d2 is not None:
        rep = audit_split(args.d, args.d2)
        _emit(args, rep.to_json(), f"({rep.pair.d1}, {rep.pair.d2}) pwr={rep.is_pwr} solution={rep.solution}")
        return EXIT_OK
    rep = audit(args.d)
    lines = [f"d={rep.d} has_pwr={rep.has_pwr}"]
    for p in rep.pairs:
        lines.append(f"  ({p.pair.d1}, {p.pair.d2}) pwr={p.is_pwr} cos={p.angle_cos} generator={p.generator}")
    _emit(args, rep.to_json(), "\n".join(lines))
    return EXIT_OK


def cmd_wr(args) -> int:
    wr = enumerate_wr(make_field(args.d))
    if args.json:
        write_wr_jsonl(wr, sys.stdout)
    else:
        for I in wr:
            print(f"norm={I.norm} {I}")
    return EXIT_OK


def cmd_pell(args) -> int:
    pair = make_pair(args.d1, args.d2)
    k_max = args.kmax if args.kmax is not None else pell_bounds(pair, fundamental_unit(pair.field))[0]
    sol = solve_gpell(pair, k_max) if k_max >= 1 else None
    if sol is None:
        _emit(args, {"solution": None}, "no solution")
    else:
        _emit(args, sol.to_json(), f"k={sol.k} l={sol.l} t={sol.t}")
    return EXIT_OK


def cmd_unit(args) -> int:
    eps = fundamental_unit(make_field(args.d))
    obj = {**eps.unit.to_json(), "norm": eps.unit_norm, "period": eps.period, "unit": str(eps.unit)}
    _emit(args, obj, f"{eps.unit} norm={eps.unit_norm} period={eps.period}")
    return EXIT_OK


def cmd_principal(args) -> int:
    I = canonical_ideal(make_field(args.d), args.a, args.b)
    p = is_principal_cycle(I)
    _emit(args, {**I.to_json(), "principal": p}, f"{I} principal={p}")
    return EXIT_OK


def cmd_scan(args) -> int:
    s = scan_stats(args.kmax, args.cls, args.workers, args.nmax)
    hist = " ".join(f"{n}:{c}" for n, c in s.histogram.items())
    _emit(
        args,
        s.to_json(),
        f"total={s.total} n0={float(s.fraction_n0):.4%} n1={float(s.fraction_n1):.4%} max_n={s.max_n}\n{hist}",
    )
    return EXIT_OK


def cmd_scatter(args) -> int:
    if args.csv:
        try:
            with open(args.csv, "w", newline="") as fh:
                n = scatter_export(args.d1max, args.klmax, args.cls, fh)
        except OSError as exc:
            raise errors.SinkFailure(str(exc)) from exc
        print(json.dumps({"rows": n, "path": args.csv}) if args.json else f"{n} rows -> {args.csv}", file=sys.stderr)
    else:
        scatter_export(args.d1max, args.klmax, args.cls, sys.stdout)
    return EXIT_OK


def cmd_prime(args) -> int:
    recs = prime_pwr_search(args.limit)
    if args.json:
        for r in recs:
            print(json.dumps(r.to_json()))
    else:
        for r in recs:
            s = r.solution
            print(f"p={r.prime} d={r.pair.d} ({r.pair.d1}, {r.pair.d2}) k={s.k} l={s.l} t={s.t} [{r.family}]")
    return EXIT_OK


def cmd_density(args) -> int:
    r = cf_density(args.k, args.l, args.bound)
    _emit(args, r.to_json(), f"constant={r.constant_part:.8f} correction={r.correction} c_f={r.c_f:.6f}")
    return EXIT_OK


def cmd_bigdemo(args) -> int:
    b = bigdemo(args.digits, _effort(args, FAST))
    text = "\n".join(
        f"{name}: n={t.n} d1={t.d1}\n{' ' * len(name)}  d2={t.d2}  ({secs:.2f}s)"
        for name, t, secs in (("3 mod 4", b.mod3, b.seconds_mod3), ("1 mod 4", b.mod1, b.seconds_mod1))
    )
    _emit(args, b.to_json(), text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=None, help="seed for factoring attempts")
    common.add_argument("--effort", choices=sorted(EFFORTS), default=None, help="factoring budget")

    p = argparse.ArgumentParser(prog="pwrideal", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    classes = [c.value for c in GenClass]

    def add(name: str, fn: Callable, help_: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("gen", cmd_gen, "generate a PWR pair from k")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--l", type=int, default=None)
    sp.add_argument("--class", dest="cls", type=_cls, choices=list(GenClass), metavar="{" + ",".join(classes) + "}", default=GenClass.MOD3)
    sp.add_argument("--nmax", type=int, default=64)

    sp = add("verify", cmd_verify, "audit the PWR criterion for d, or for a split d1 d2")
    sp.add_argument("d", type=int)
    sp.add_argument("d2", type=int, nargs="?", default=None)

    sp = add("wr", cmd_wr, "list WR ideals of Q(sqrt d)")
    sp.add_argument("d", type=int)

    sp = add("pell", cmd_pell, "solve k^2 d2 - l^2 d1 = +-2 or +-4")
    sp.add_argument("d1", type=int)
    sp.add_argument("d2", type=int)
    sp.add_argument("--kmax", type=int, default=None, help="search bound (default: from the unit)")

    sp = add("unit", cmd_unit, "fundamental unit of Q(sqrt d)")
    sp.add_argument("d", type=int)

    sp = add("principal", cmd_principal, "is <a, (b + sqrt disc)/2> principal?")
    sp.add_argument("d", type=int)
    sp.add_argument("a", type=int)
    sp.add_argument("b", type=int)

    sp = add("scan", cmd_scan, "first squarefree family index over all (k, l)")
    sp.add_argument("--kmax", type=int, default=2000)
    sp.add_argument("--class", dest="cls", type=_cls, choices=list(GenClass), metavar="{" + ",".join(classes) + "}", default=GenClass.MOD3)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--nmax", type=int, default=64)

    sp = add("scatter", cmd_scatter, "exhaustive (d1, d2, k, l, t) table as CSV")
    sp.add_argument("--d1max", type=int, default=200)
    sp.add_argument("--klmax", type=int, default=800)
    sp.add_argument("--class", dest="cls", type=_cls, choices=list(GenClass), metavar="{" + ",".join(classes) + "}", default=GenClass.MOD3)
    sp.add_argument("--csv", default=None, help="output path (default stdout)")

    sp = add("prime", cmd_prime, "fields with prime PWR ideals")
    sp.add_argument("--limit", type=int, default=200)

    sp = add("density", cmd_density, "squarefree density constant of a family")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--bound", type=int, default=10**6)

    sp = add("bigdemo", cmd_bigdemo, "generate pairs from k = 10^digits - 1")
    sp.add_argument("--digits", type=int, default=60)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _BUDGET_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (errors.InvariantViolation, AssertionError) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except _ARG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":
    sys.exit(main())
