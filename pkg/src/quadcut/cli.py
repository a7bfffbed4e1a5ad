"""Command-line front end: ``quadcut gen|solve|bound|bench``.

Exit codes: 0 success, 1 iteration cap reached, 2 parse error,
3 infeasible instance, 4 internal assertion (duplicate generating vector
or disagreeing algorithms).
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from quadcut.bounds import compute_bounds
from quadcut.cutting_plane import DEFAULT_EPS, DuplicateLambdaError, run
from quadcut.generate import generate
from quadcut.linearize import relaxation_bound
from quadcut.model import InstanceError, format_instance, load_instance
from quadcut.oracle import brute_force

EXIT_OK = 0
EXIT_CAP = 1
EXIT_PARSE = 2
EXIT_INFEASIBLE = 3
EXIT_INTERNAL = 4

TRACE_HEADER = ["iter", "lb", "ub", "gap", "cuts", "xtilde"]
BENCH_HEADER = ["instance", "algo", "status", "value", "iterations", "time_s", "gap"]
ALGOS = ("bml", "improved", "brute")
AGREE_TOL = 1e-9


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def fmt(v: float) -> str:
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    if v == 0:
        v = 0.0  # no "-0"
    return format(v, ".15g")


def bits(x) -> str:
    return "".join(str(int(v)) for v in x) if x is not None else ""


def _load(path):
    try:
        return load_instance(path)
    except InstanceError as exc:
        raise CliError(f"{path}: {exc}", EXIT_PARSE) from exc
    except OSError as exc:
        raise CliError(f"{path}: {exc}", EXIT_PARSE) from exc


def solve_one(inst, algo: str, eps: float = DEFAULT_EPS, max_iter=None) -> dict:
    """Run one algorithm; returns a flat result record."""
    start = time.perf_counter()
    if algo == "brute":
        res = brute_force(inst)
        elapsed = time.perf_counter() - start
        if res is None:
            return dict(status="infeasible", value=math.nan, x=None, iterations=0, gap=math.nan, time=elapsed, trace=[])
        value, x = res
        return dict(status="converged", value=value, x=x, iterations=0, gap=0.0, time=elapsed, trace=[])
    try:
        rep = run(inst, algo, eps=eps, max_iter=max_iter)
    except DuplicateLambdaError as exc:
        raise CliError(f"internal error: {exc}", EXIT_INTERNAL) from exc
    elapsed = time.perf_counter() - start
    return dict(
        status=rep.status,
        value=rep.value,
        x=rep.x,
        iterations=rep.iterations,
        gap=rep.gap,
        time=elapsed,
        trace=rep.trace,
    )


def write_trace(rows, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(TRACE_HEADER)
    for row in rows:
        w.writerow([row.iter, fmt(row.lb), fmt(row.ub), fmt(row.gap), row.cuts, bits(row.xtilde)])


def cmd_gen(args) -> int:
    try:
        inst = generate(
            args.n,
            args.density,
            args.b_max,
            tuple(args.c_range),
            args.constraint,
            args.seed,
        )
    except (ValueError, InstanceError) as exc:
        raise CliError(f"invalid spec: {exc}", EXIT_PARSE) from exc
    header = (
        f"quadcut gen n={args.n} density={args.density} b_max={args.b_max} "
        f"c_range={args.c_range[0]},{args.c_range[1]} constraint={args.constraint} seed={args.seed}"
    )
    text = format_instance(inst, header=header)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = _load(args.file)
    res = solve_one(inst, args.algo, args.eps, args.max_iter)
    if args.trace:
        with open(args.trace, "w", newline="") as fh:
            write_trace(res["trace"], fh)
    print(f"algo: {args.algo}")
    print(f"status: {res['status']}")
    if res["status"] == "infeasible":
        print("instance has no feasible binary point", file=sys.stderr)
        return EXIT_INFEASIBLE
    print(f"value: {fmt(res['value'])}")
    print(f"x: {bits(res['x'])}")
    print(f"iterations: {res['iterations']}")
    print(f"gap: {fmt(res['gap'])}")
    return EXIT_OK if res["status"] == "converged" else EXIT_CAP


def cmd_bound(args) -> int:
    inst = _load(args.file)
    value = relaxation_bound(inst, compute_bounds(inst), args.relax)
    print(fmt(value))
    return EXIT_OK


def _bench_instance(path, eps):
    inst = load_instance(path)
    return [(algo, solve_one(inst, algo, eps)) for algo in ALGOS]


def cmd_bench(args) -> int:
    root = Path(args.dir)
    if not root.is_dir():
        raise CliError(f"{root}: not a readable directory", EXIT_PARSE)
    paths = sorted(p for p in root.glob(args.pattern) if p.is_file())
    for p in paths:
        _load(p)  # surface parse errors before any solving
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_bench_instance, paths, [args.eps] * len(paths)))
    else:
        results = [_bench_instance(p, args.eps) for p in paths]

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BENCH_HEADER)
    mismatches = []
    for path, rows in zip(paths, results):
        values = [r["value"] for _, r in rows]
        statuses = {r["status"] for _, r in rows}
        if statuses == {"infeasible"}:
            pass
        elif statuses != {"converged"} or max(values) - min(values) > AGREE_TOL:
            mismatches.append(path.name)
        for algo, r in rows:
            w.writerow([path.stem, algo, r["status"], fmt(r["value"]), r["iterations"], f"{r['time']:.6f}", fmt(r["gap"])])
    if args.out:
        Path(args.out).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    if mismatches:
        print(f"algorithms disagree on: {', '.join(mismatches)}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quadcut", description="Exact cutting-plane solvers for quadratic 0-1 programs.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a seeded random instance")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--density", type=float, default=0.5)
    g.add_argument("--b-max", type=float, default=10.0)
    g.add_argument("--c-range", type=float, nargs=2, default=[-10.0, 10.0], metavar=("LO", "HI"))
    g.add_argument("--constraint", default="box", help="box | card:<le|ge|eq>:<k|half> | knap:<le|ge>:<ratio>")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out", help="output file (default stdout)")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="solve an instance file")
    s.add_argument("file")
    s.add_argument("--algo", choices=ALGOS, default="improved")
    s.add_argument("--eps", type=float, default=DEFAULT_EPS)
    s.add_argument("--max-iter", type=int, default=None)
    s.add_argument("--trace", help="write the per-iteration CSV trace here")
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bound", help="continuous relaxation lower bound")
    b.add_argument("file")
    b.add_argument("--relax", choices=("pl1", "pl2"), default="pl2")
    b.set_defaults(func=cmd_bound)

    bn = sub.add_parser("bench", help="solve every instance in a directory with all algorithms")
    bn.add_argument("dir")
    bn.add_argument("--out", help="CSV output path (default stdout)")
    bn.add_argument("--pattern", default="*.qp", help="instance file glob (default *.qp)")
    bn.add_argument("--eps", type=float, default=DEFAULT_EPS)
    bn.add_argument("--jobs", type=int, default=1)
    bn.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
