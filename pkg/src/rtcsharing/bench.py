"""Benchmark plumbing shared by the CLI and the acceptance suite.

Methods run one after another over the whole workload. Each result is
reduced to its size and digest as soon as it is produced, so a run holds a
single result in memory unless the caller asks to keep them.
"""

from __future__ import annotations

import csv
import io
import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .engine import (
    METHODS,
    EvalStats,
    QueryRun,
    RtcCache,
    full_sharing,
    iter_workload,
    no_sharing,
    rtc_sharing,
)
from .graph import LabeledGraph, PairRelation, format_edge_list, label_names
from .oracle import OracleConfig, oracle_eval
from .rpq import Rpq, pretty
from .workload import random_batch_unit, random_graph, random_rpq

CSV_COLUMNS = (
    "query_id",
    "method",
    "result_pairs",
    "shared_pairs",
    "t_shared_us",
    "t_prejoin_us",
    "t_remainder_us",
    "t_total_us",
    "rtc_computations",
    "cache_hits",
    "eq7_skips",
    "eq8_skips",
)

# Columns that vary between otherwise identical runs.
TIME_COLUMNS = frozenset(c for c in CSV_COLUMNS if c.startswith("t_"))


def _us(seconds: float) -> int:
    return int(round(seconds * 1e6))


@dataclass
class Row:
    query_id: int
    query: str
    method: str
    result_pairs: int
    digest: str
    stats: EvalStats
    result: PairRelation | None = None

    def csv_values(self) -> list[object]:
        s = self.stats
        return [
            self.query_id,
            self.method,
            self.result_pairs,
            s.shared_pairs,
            _us(s.t_shared),
            _us(s.t_prejoin),
            _us(s.t_remainder),
            _us(s.t_total),
            s.rtc_computations,
            s.cache_hits,
            s.eq7_dup_skips,
            s.eq8_dup_skips,
        ]


@dataclass
class Mismatch:
    query_id: int
    query: str
    sizes: dict[str, int]
    digests: dict[str, str]

    def describe(self) -> str:
        parts = ", ".join(f"{m}={n} pairs ({self.digests[m][:12]})" for m, n in self.sizes.items())
        return f"query {self.query_id} {self.query!r}: {parts}"


@dataclass
class RunReport:
    rows: list[Row] = field(default_factory=list)

    def by_method(self, method: str) -> list[Row]:
        return [r for r in self.rows if r.method == method]

    def mismatches(self) -> list[Mismatch]:
        grouped: dict[int, list[Row]] = {}
        for row in self.rows:
            grouped.setdefault(row.query_id, []).append(row)
        out = []
        for qid in sorted(grouped):
            rows = grouped[qid]
            if len({r.digest for r in rows}) > 1:
                out.append(
                    Mismatch(
                        qid,
                        rows[0].query,
                        {r.method: r.result_pairs for r in rows},
                        {r.method: r.digest for r in rows},
                    )
                )
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in self.rows:
            writer.writerow(row.csv_values())
        return buf.getvalue()


def run_methods(
    graph: LabeledGraph,
    queries: Sequence[str],
    methods: Iterable[str] = METHODS,
    keep_results: bool = False,
) -> RunReport:
    """Evaluate ``queries`` with each method in turn, digesting every result."""
    report = RunReport()
    for method in methods:
        if method not in METHODS:
            raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
        cache = RtcCache()
        shared: dict[str, PairRelation] = {}
        for qid, run in enumerate(iter_workload(graph, queries, method, cache, shared)):
            report.rows.append(_row(qid, run, keep_results))
            del run
    return report


def _row(qid: int, run: QueryRun, keep: bool) -> Row:
    return Row(
        qid,
        run.query,
        run.method,
        len(run.result),
        run.result.digest(),
        run.stats,
        run.result if keep else None,
    )


# --- oracle equivalence sweeps -------------------------------------------

QUERY_LABELS = tuple(label_names(4))


@dataclass(frozen=True)
class Instance:
    seed: int
    index: int
    graph: LabeledGraph
    query: Rpq

    @property
    def text(self) -> str:
        return pretty(self.query)


def make_instance(
    seed: int, index: int, max_vertices: int, max_depth: int = 3, shape: str = "batch"
) -> Instance:
    """The ``index``-th random instance of a sweep; reproducible from (seed, index) alone."""
    rng = random.Random(seed * 1_000_003 + index)
    graph = random_graph(rng, max_vertices)
    if shape == "batch":
        query = random_batch_unit(rng, QUERY_LABELS)
    elif shape == "rpq":
        query = random_rpq(rng, QUERY_LABELS, max_depth)
    else:
        raise ValueError(f"unknown query shape {shape!r}")
    return Instance(seed, index, graph, query)


def evaluate_all(
    graph: LabeledGraph, query: Rpq, config: OracleConfig = OracleConfig()
) -> dict[str, PairRelation]:
    """One query through every evaluator, the oracle included."""
    return {
        "rtc": rtc_sharing(graph, query),
        "full": full_sharing(graph, [query])[0],
        "no": no_sharing(graph, [query])[0],
        "oracle": oracle_eval(graph, query, config),
    }


def format_counterexample(instance: Instance, results: dict[str, PairRelation]) -> str:
    lines = [
        f"# seed={instance.seed} index={instance.index}",
        f"# query: {instance.text}",
    ]
    for name, rel in results.items():
        lines.append(f"# {name}: {rel.sorted()}")
    return "\n".join(lines) + "\n" + format_edge_list(instance.graph)
