"""Command line entry point: run, gen, diff and bench."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bench import STRUCTURES, bench_run, rows_to_csv, rows_to_json, speedups
from .harness import diff_run, run_trace
from .lcforest import BACKEND
from .solvers import CYCLE, PATH
from .trace import PROBLEMS, TraceError, format_trace, generate_trace, parse_trace


def _problem_list(text: str) -> list[str]:
    names = [t.strip().upper() for t in text.split(",") if t.strip()]
    bad = [t for t in names if t not in PROBLEMS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown problem(s): {', '.join(bad)}")
    return names


def _int_list(text: str) -> list[int]:
    try:
        return [int(float(t)) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated sizes, got {text!r}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_trace(text)


def cmd_run(args) -> int:
    report = run_trace(_load(args.trace), args.problems)
    _emit(report.to_json() + "\n" if args.format == "json" else report.answer_lines(), args.out)
    return 0


def cmd_diff(args) -> int:
    report = diff_run(_load(args.trace), args.problems, check_structure=not args.no_structure)
    if args.format == "json":
        _emit(report.to_json() + "\n", args.out)
    else:
        lines = [f"{len(report.answers)} queries, {len(report.mismatches)} mismatches\n"]
        lines += [m + "\n" for m in report.mismatches]
        _emit("".join(lines), args.out)
    return 0 if report.passed else 1


def cmd_gen(args) -> int:
    mix = tuple(float(x) for x in args.mix.split(","))
    if len(mix) != 3:
        raise SystemExit("--mix needs three weights: insert,delete,query")
    events = generate_trace(
        args.seed,
        n=args.n,
        side=args.side,
        events=args.events,
        mix=mix,
        k_range=(args.k_min, args.k_max),
        path_k=None if args.path_k == 0 else args.path_k,
        path_mode=args.mode,
        problems=args.problems or PROBLEMS,
        layout=args.layout,
    )
    _emit(format_trace(events), args.out)
    return 0


def cmd_bench(args) -> int:
    rows = bench_run(
        sizes=args.sizes,
        density=args.density,
        updates=args.updates,
        queries=args.queries,
        rebuilds=args.rebuilds,
        query_k=args.query_k,
        path_k=args.path_k,
        seed=args.seed,
        layout=args.layout,
        structures=args.structures,
    )
    _emit(rows_to_json(rows) + "\n" if args.format == "json" else rows_to_csv(rows), args.out)
    if args.format == "csv":
        for (s, n), x in sorted(speedups(rows).items()):
            print(f"# {s} n={n}: rebuild/update = {x:.0f}x (lct backend: {BACKEND})", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="udkernel", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="replay a trace and print answer lines")
    run.add_argument("--trace", required=True, help="trace file, or - for stdin")
    run.add_argument("--problems", type=_problem_list, help="comma-separated subset of " + ",".join(PROBLEMS))
    run.add_argument("--format", choices=("text", "json"), default="text")
    run.add_argument("--out")
    run.set_defaults(func=cmd_run)

    diff = sub.add_parser("diff", help="replay a trace against the exhaustive oracle")
    diff.add_argument("--trace", required=True)
    diff.add_argument("--problems", type=_problem_list)
    diff.add_argument("--format", choices=("text", "json"), default="text")
    diff.add_argument("--no-structure", action="store_true", help="skip per-update invariant checks")
    diff.add_argument("--out")
    diff.set_defaults(func=cmd_diff)

    gen = sub.add_parser("gen", help="write a seeded random trace")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--n", type=int, default=40, help="maximum number of active points")
    gen.add_argument("--side", type=float, default=6.0)
    gen.add_argument("--events", type=int, default=60)
    gen.add_argument("--mix", default="0.5,0.2,0.3", help="insert,delete,query weights")
    gen.add_argument("--k-min", type=int, default=0)
    gen.add_argument("--k-max", type=int, default=5)
    gen.add_argument("--path-k", type=int, default=3, help="0 omits the header and PATH queries")
    gen.add_argument("--mode", choices=(PATH, CYCLE), default=PATH)
    gen.add_argument("--problems", type=_problem_list)
    gen.add_argument("--layout", choices=("uniform", "lattice"), default="uniform")
    gen.add_argument("--out")
    gen.set_defaults(func=cmd_gen)

    bench = sub.add_parser("bench", help="latency of dynamic updates against rebuilding")
    bench.add_argument("--sizes", type=_int_list, default=[10_000, 100_000])
    bench.add_argument("--density", type=float, default=0.5)
    bench.add_argument("--layout", choices=("uniform", "lattice"), default="uniform")
    bench.add_argument("--updates", type=int, default=2000)
    bench.add_argument("--queries", type=int, default=3)
    bench.add_argument("--rebuilds", type=int, default=2)
    bench.add_argument("--query-k", type=int, default=2)
    bench.add_argument("--path-k", type=int, default=3)
    bench.add_argument(
        "--structures",
        type=lambda s: [t.strip() for t in s.split(",") if t.strip()],
        default=list(STRUCTURES),
        help="comma-separated subset of " + ",".join(STRUCTURES),
    )
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--format", choices=("csv", "json"), default="csv")
    bench.add_argument("--out")
    bench.set_defaults(func=cmd_bench)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TraceError as exc:
        print(f"trace error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
