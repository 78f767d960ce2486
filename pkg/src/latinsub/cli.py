"""Command-line front end: ``latinsub <subcommand> [--flags]``.

Exit status is 0 for an affirmative or valid result, 1 for a negative answer
or a domain error, and 2 for a usage error.
"""
from __future__ import annotations

import argparse
import random
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from . import census, construct, loops, oracle, ryser
from .core import format_square, parse_partial, parse_square
from .errors import LatinError

YES, NO = 0, 1


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _emit(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _write_result(res: construct.ConstructionResult, out: Optional[str]) -> None:
    # Round-trip before anything is reported.
    text = format_square(res.square)
    parse_square(text)
    _emit(text, out)
    print(f"case {res.case}")
    for w in res.witnesses:
        print(w.describe())


# -- subcommands -------------------------------------------------------------

def cmd_exist(args) -> int:
    ok, why = construct.existence_verdict(args.n, args.a, args.b)
    print(f"YES ({why})" if ok else f"NO ({why})")
    return YES if ok else NO


def cmd_build(args) -> int:
    ok, why = construct.existence_verdict(args.n, args.a, args.b)
    if not ok:
        print(f"NO ({why})")
        return NO
    _write_result(construct.build_two_subsquares(args.n, args.a, args.b), args.out)
    return YES


def _overlap_reason(n: int, a: int, b: int, c: int) -> str:
    if not n - 2 * b >= a - 2 * c >= 0:
        return "linear inequality"
    if not construct.overlap_conditions(n, a, b, c):
        return "quadratic inequality"
    return "both inequalities"


def cmd_overlap_check(args) -> int:
    ok = construct.overlap_conditions(args.n, args.a, args.b, args.c)
    print(f"{'YES' if ok else 'NO'} ({_overlap_reason(args.n, args.a, args.b, args.c)})")
    if args.verbose:
        quick = construct.corollary_sufficient(args.n, args.a, args.b, args.c)
        print(f"simple sufficient test: {'holds' if quick else 'fails'}")
    return YES if ok else NO


def cmd_overlap_build(args) -> int:
    if not construct.overlap_conditions(args.n, args.a, args.b, args.c):
        print(f"NO ({_overlap_reason(args.n, args.a, args.b, args.c)})")
        return NO
    _write_result(construct.build_overlapping(args.n, args.a, args.b, args.c), args.out)
    return YES


def cmd_disjoint_build(args) -> int:
    n, a, b, c = args.n, args.a, args.b, args.c
    if c == a:
        if not construct.share_all_rows_exists(n, a, b):
            print("NO (share-all-rows condition)")
            return NO
        _write_result(construct.build_share_all_rows(n, a, b), args.out)
        return YES
    if not construct.disjoint_share_rows_exists(n, a, b, c):
        print("NO (n >= a + 2b)")
        return NO
    _write_result(construct.build_disjoint_share_rows(n, a, b, c), args.out)
    return YES


def cmd_enumerate(args) -> int:
    L = parse_square(_read(args.input))
    found = census.enumerate_subsquares(L, args.m, workers=args.workers)
    bound = census.subsquare_upper_bound(L.order, args.m)
    within = len(found) <= bound
    print(f"{len(found)} of bound {bound}")
    print("WITHIN BOUND" if within else "BOUND VIOLATED")
    for h in found:
        print(h.describe())
    return YES if within else NO


def cmd_bound(args) -> int:
    if args.exponent_check is not None:
        t0 = time.perf_counter()
        rep = census.exponent_check(args.exponent_check, keep_table=False)
        took = time.perf_counter() - t0
        print(f"checked m <= {rep.m_max}: {len(rep.violations)} violations ({took:.2f}s)")
        for m, t, e in rep.violations[:20]:
            print(f"violation m={m} t={t} psi+t={e}")
        return YES if rep.ok else NO
    if args.n is None or args.m is None:
        raise argparse.ArgumentTypeError("bound needs --n and --m (or --exponent-check)")
    q = census.BoundQuery(args.n, args.m)
    print(f"bound {q.bound} (h={q.h})")
    if args.t is not None:
        print(f"psi({args.m},{args.t}) = {census.psi(args.m, args.t)}")
    return YES


def cmd_blocks(args) -> int:
    L = parse_square(_read(args.input))
    rows = args.rows
    if any(not 0 <= r < L.order for r in rows):
        print(f"rows must lie in 0..{L.order - 1}", file=sys.stderr)
        return NO
    dec = census.block_decomposition(L, rows)
    print(f"{len(dec.blocks)} blocks, sizes {','.join(map(str, dec.sizes))}")
    for b in dec.blocks:
        print(" ".join(map(str, sorted(b))))
    return YES


def cmd_ryser_check(args) -> int:
    rep = ryser.ryser_check(parse_partial(_read(args.input)))
    print(f"threshold {rep.threshold}")
    print("counts " + " ".join(f"{s}:{k}" for s, k in sorted(rep.counts.items())))
    if rep.ok:
        print("YES (every symbol meets the threshold)")
        return YES
    print("NO (symbols " + ",".join(map(str, sorted(rep.violating))) + " below threshold)")
    return NO


def cmd_ryser_complete(args) -> int:
    R = parse_partial(_read(args.input))
    if R.is_filled() and not args.search:
        rep = ryser.ryser_check(R)
        if not rep.ok:
            print("NO (symbols " + ",".join(map(str, sorted(rep.violating))) + " below threshold)")
            return NO
        sq = ryser.complete_to_square(R)
    else:
        rng = random.Random(args.seed)
        sq = ryser.complete_partial(R, budget=args.budget, rng=rng)
        if sq is None:
            print("NO (no completion exists)")
            return NO
    _emit(format_square(sq), args.out)
    return YES


def cmd_loop_p(args) -> int:
    Q = loops.Loop(parse_square(_read(args.input)))
    ground = list(Q.elements()) if args.set is None else args.set
    got = loops.full_products(Q, ground, capacity=args.capacity)
    print("P = {" + ",".join(map(str, sorted(got.products))) + "}")
    if args.set is None:
        full = got.products == frozenset(Q.elements())
        print("FULL" if full else "NOT FULL")
        return YES if full else NO
    return YES


def cmd_loop_build(args) -> int:
    Q, cert = loops.build_full_loop(args.n, seed=args.seed)
    _emit(format_square(Q.table), args.out)
    if args.cert:
        Path(args.cert).write_text(loops.format_certificate(cert))
    print("stages " + " -> ".join(map(str, cert.orders())), file=sys.stderr if args.out is None else sys.stdout)
    return YES


def cmd_loop_verify(args) -> int:
    Q = loops.Loop(parse_square(_read(args.input)))
    cert = loops.parse_certificate(_read(args.cert))
    check = loops.verify_certificate(Q, cert)
    print("VALID" if check.ok else f"INVALID: {check.reason}")
    return YES if check.ok else NO


def cmd_oracle(args) -> int:
    t0 = time.perf_counter()
    # From order 7 on only orders up to n/2 are scanned; larger proper ones cannot occur.
    truth = oracle.ground_truth(args.n, workers=args.workers, max_order=args.n // 2 if args.n >= 7 else None)
    bad = oracle.compare_with_deciders(truth)
    took = time.perf_counter() - t0
    print(f"scanned {truth.squares} reduced squares of order {args.n} in {took:.1f}s")
    print("realized pairs " + " ".join(f"{a},{b}" for a, b in sorted(truth.pairs)))
    print("realized overlaps " + " ".join(f"{a},{b},{c}" for a, b, c in sorted(truth.overlaps)))
    for d in bad:
        print(f"DISAGREE {d.kind} {d.params}: decided {d.decided}, scan {d.truth}")
    print("AGREE" if not bad else f"{len(bad)} disagreements")
    return YES if not bad else NO


# -- parser ------------------------------------------------------------------

def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="latinsub", description="Latin squares with prescribed subsquares.")
    p.add_argument("--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, func, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(func=func)
        sp.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS)
        return sp

    def nab(sp, c: bool = False) -> None:
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--a", type=int, required=True)
        sp.add_argument("--b", type=int, required=True)
        if c:
            sp.add_argument("--c", type=int, required=True)

    sp = add("exist", cmd_exist, "decide whether two subsquares of orders a, b fit in order n")
    nab(sp)
    sp = add("build", cmd_build, "build a square with two subsquares of orders a, b")
    nab(sp)
    sp.add_argument("--out")
    sp = add("overlap-check", cmd_overlap_check, "decide the overlapping configuration")
    nab(sp, c=True)
    sp = add("overlap-build", cmd_overlap_build, "build subsquares a, b meeting in order c")
    nab(sp, c=True)
    sp.add_argument("--out")
    sp = add("disjoint-build", cmd_disjoint_build, "build disjoint subsquares sharing c rows")
    nab(sp, c=True)
    sp.add_argument("--out")

    sp = add("enumerate", cmd_enumerate, "list all order-m subsquares of a square")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--workers", type=_positive, default=1)
    sp = add("bound", cmd_bound, "upper bound on the number of order-m subsquares")
    sp.add_argument("--n", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--t", type=int)
    sp.add_argument("--exponent-check", type=_positive, metavar="M_MAX")
    sp = add("blocks", cmd_blocks, "block decomposition of a row strip")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--rows", type=_int_list, required=True)

    sp = add("ryser-check", cmd_ryser_check, "symbol counts against the embedding threshold")
    sp.add_argument("--in", dest="input", required=True)
    sp = add("ryser-complete", cmd_ryser_complete, "complete a partial array to a latin square")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out")
    sp.add_argument("--search", action="store_true", help="use backtracking even for a filled block")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", type=_positive)

    sp = add("loop-p", cmd_loop_p, "full products of a loop")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--set", type=_int_list)
    sp.add_argument("--capacity", type=_positive, default=loops.DEFAULT_CAPACITY)
    sp = add("loop-build", cmd_loop_build, "build a loop of order n whose full product is everything")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--out")
    sp.add_argument("--cert")
    sp.add_argument("--seed", type=int, default=0)
    sp = add("loop-verify", cmd_loop_verify, "check a loop against its certificate")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--cert", required=True)

    sp = add("oracle", cmd_oracle, "exhaustive check of the deciders at small order")
    sp.add_argument("--n", type=int, required=True, choices=range(1, 8), metavar="N")
    sp.add_argument("--workers", type=_positive, default=1)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except argparse.ArgumentTypeError as e:
        parser.error(str(e))
    except (LatinError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return NO


if __name__ == "__main__":
    sys.exit(main())
