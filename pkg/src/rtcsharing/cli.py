"""``rtcsharing`` command line: gen, eval, oracle-check, dump-reduction.

Exit codes: 0 success, 1 usage or I/O error, 2 result mismatch between
evaluators.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bench import evaluate_all, format_counterexample, make_instance, run_methods
from .engine import METHODS, rtc_sharing
from .graph import (
    EdgeListError,
    PairRelation,
    format_edge_list,
    generate_rmat,
    label_names,
    load_edge_list,
)
from .oracle import OracleConfig
from .reduction import compute_rtc, condense, edge_level_reduce, format_reduction
from .rpq import ClauseExplosionError, RpqSyntaxError, parse_query_file, parse_rpq
from .workload import format_workloads, generate_workloads

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH = 0, 1, 2


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _methods(text: str) -> list[str]:
    methods = [m.strip() for m in text.split(",") if m.strip()]
    bad = [m for m in methods if m not in METHODS]
    if bad or not methods:
        raise argparse.ArgumentTypeError(f"methods must be drawn from {','.join(METHODS)}")
    return methods


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def cmd_gen(args: argparse.Namespace) -> int:
    if args.workload:
        if args.scale is not None or args.edge_factor is not None:
            raise UsageError("--scale/--edge-factor do not apply to --workload")
        workloads = generate_workloads(
            label_names(args.labels), args.r_lengths, args.per_length, args.queries, args.seed
        )
        _emit(format_workloads(workloads), args.out)
        return EXIT_OK
    if args.scale is None:
        raise UsageError("gen needs --scale (or --workload)")
    if args.scale < 1 or args.labels < 1:
        raise UsageError("--scale and --labels must be >= 1")
    edge_factor = 3 if args.edge_factor is None else args.edge_factor
    if edge_factor < 0:
        raise UsageError("--edge-factor must be >= 0")
    graph = generate_rmat(args.scale, edge_factor, args.labels, args.seed)
    _emit(format_edge_list(graph), args.out)
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    graph = load_edge_list(args.graph)
    queries = parse_query_file(Path(args.workload).read_text(encoding="utf-8"))
    for q in queries:
        parse_rpq(q)
    keep = args.dump_results
    report = run_methods(graph, queries, args.methods, keep_results=keep)

    mismatches = report.mismatches()
    if mismatches:
        print(f"result mismatch on {len(mismatches)} queries:", file=sys.stderr)
        for m in mismatches:
            print("  " + m.describe(), file=sys.stderr)
        return EXIT_MISMATCH

    if args.dump_shared:
        for row in report.rows:
            for key, size in sorted(row.stats.shared.items()):
                print(f"shared\t{row.query_id}\t{row.method}\t{key}\t{size}", file=sys.stderr)
    if keep:
        for row in report.rows:
            for s, d in row.result.sorted():
                print(f"result\t{row.query_id}\t{row.method}\t{s}\t{d}", file=sys.stderr)
    _emit(report.to_csv(), args.out)
    return EXIT_OK


def cmd_oracle_check(args: argparse.Namespace) -> int:
    if args.instances < 0 or args.max_v < 1:
        raise UsageError("--instances must be >= 0 and --max-v >= 1")
    config = OracleConfig(max_vertices=max(64, args.max_v))
    ok = 0
    first_bad = None
    for index in range(args.instances):
        inst = make_instance(args.seed, index, args.max_v, args.max_depth, args.shape)
        results = evaluate_all(inst.graph, inst.query, config)
        if args.inject_fault and len(results["rtc"]):
            # deliberate corruption so the failure path can be exercised
            pairs = set(results["rtc"].pairs)
            pairs.discard(max(pairs))
            results["rtc"] = PairRelation(pairs)
        reference = results["oracle"]
        if all(rel == reference for rel in results.values()):
            ok += 1
            continue
        print(f"mismatch: seed={args.seed} index={index} query={inst.text}", file=sys.stderr)
        if first_bad is None:
            first_bad = (inst, results)
    print(f"{ok}/{args.instances} ok")
    if first_bad is None:
        return EXIT_OK
    Path(args.counterexample).write_text(format_counterexample(*first_bad), encoding="utf-8")
    print(f"first counterexample written to {args.counterexample}", file=sys.stderr)
    return EXIT_MISMATCH


def cmd_dump_reduction(args: argparse.Namespace) -> int:
    graph = load_edge_list(args.graph)
    r_g = rtc_sharing(graph, parse_rpq(args.r))
    gr = edge_level_reduce(r_g)
    cond = condense(gr)
    _emit(format_reduction(gr, cond, compute_rtc(cond)), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rtcsharing", description="Multi-query RPQ evaluation with shared reduced closures."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate an R-MAT graph or a query workload")
    gen.add_argument("--workload", action="store_true", help="emit a workload instead of a graph")
    gen.add_argument("--scale", type=int, help="log2 of the vertex count")
    gen.add_argument("--edge-factor", type=int, help="log2 of edges per vertex (default 3)")
    gen.add_argument("--labels", type=int, default=4, help="alphabet size (default 4)")
    gen.add_argument("--r-lengths", type=_int_list, default=[1, 2, 3])
    gen.add_argument("--per-length", type=int, default=2, help="closure bodies per length")
    gen.add_argument("--queries", type=int, default=4, help="queries per closure body")
    gen.add_argument("--seed", type=int, default=1)
    gen.add_argument("--out", help="output path (default stdout)")
    gen.set_defaults(func=cmd_gen)

    ev = sub.add_parser("eval", help="run methods on a workload and emit timing CSV")
    ev.add_argument("--graph", required=True)
    ev.add_argument("--workload", required=True, help="file with one query per line")
    ev.add_argument("--methods", type=_methods, default=list(METHODS))
    ev.add_argument("--out", help="CSV path (default stdout)")
    ev.add_argument("--dump-shared", action="store_true", help="shared-structure sizes to stderr")
    ev.add_argument("--dump-results", action="store_true", help="result pairs to stderr")
    ev.set_defaults(func=cmd_eval)

    oc = sub.add_parser("oracle-check", help="random equivalence sweep against the oracle")
    oc.add_argument("--instances", type=int, default=100)
    oc.add_argument("--max-v", type=int, default=16)
    oc.add_argument("--max-depth", type=int, default=3)
    oc.add_argument("--shape", choices=("batch", "rpq"), default="batch")
    oc.add_argument("--seed", type=int, default=7)
    oc.add_argument("--counterexample", default="counterexample.tsv")
    oc.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    oc.set_defaults(func=cmd_oracle_check)

    dr = sub.add_parser("dump-reduction", help="print G_R, its SCCs and the RTC for one R")
    dr.add_argument("--graph", required=True)
    dr.add_argument("--r", required=True, help="closure body, e.g. 'b.c'")
    dr.add_argument("--out")
    dr.set_defaults(func=cmd_dump_reduction)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, RpqSyntaxError, ClauseExplosionError, EdgeListError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
