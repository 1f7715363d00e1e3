"""Multi-query RPQ evaluation: RTC sharing and the two baselines.

``rtc_sharing`` splits a query into DNF clauses, keeps one RTC per distinct
closure body in an :class:`RtcCache`, and evaluates each clause with
:func:`eval_batch_unit`. ``full_sharing`` shares the fully expanded ``R+_G``
instead, and ``no_sharing`` runs the product automaton over every query.
"""

from __future__ import annotations

import time
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field

from .automaton import bind
from .graph import LabeledGraph, Pair, PairRelation
from .reduction import (
    Condensation,
    Rtc,
    compute_rtc,
    condense,
    edge_level_reduce,
    transitive_closure_bfs,
)
from .rpq import (
    DEFAULT_MAX_CLAUSES,
    Epsilon,
    Kleene,
    Rpq,
    canonical_text,
    decompose_clause,
    parse_rpq,
    to_dnf,
)

METHODS = ("rtc", "full", "no")

# Post-hoc uniqueness check of the unchecked Cartesian expansion; tests turn it on.
DEBUG_CHECKS = False


@dataclass
class EvalStats:
    """Counters and phase wall times (seconds) for one query evaluation.

    ``shared`` maps each shared structure touched (by canonical closure body)
    to its pair count. ``rtc_computations`` counts shared-structure builds:
    RTCs for RTC sharing, full ``R+_G`` relations for full sharing.
    """

    rtc_computations: int = 0
    cache_hits: int = 0
    eq7_inserts: int = 0
    eq7_dup_skips: int = 0
    eq8_inserts: int = 0
    eq8_dup_skips: int = 0
    eq9_pairs: int = 0
    post_probes: int = 0
    eq10_dup_checks: int = 0
    join_probes: int = 0
    traversal_steps: int = 0
    shared: dict[str, int] = field(default_factory=dict)
    t_shared: float = 0.0
    t_prejoin: float = 0.0
    t_remainder: float = 0.0
    t_total: float = 0.0

    @property
    def shared_pairs(self) -> int:
        return sum(self.shared.values())


@dataclass(frozen=True)
class RtcEntry:
    rtc: Rtc
    cond: Condensation


class RtcCache:
    """RTCs keyed by canonical closure-body text.

    Inserts go through ``dict.setdefault`` so that when two evaluators race
    on the same key the first insert wins and both use it.
    """

    def __init__(self) -> None:
        self._entries: dict[str, RtcEntry] = {}
        self.hits = 0
        self.misses = 0

    def get(self, key: str) -> RtcEntry | None:
        entry = self._entries.get(key)
        if entry is None:
            self.misses += 1
        else:
            self.hits += 1
        return entry

    def insert(self, key: str, entry: RtcEntry) -> RtcEntry:
        return self._entries.setdefault(key, entry)

    def __contains__(self, key: str) -> bool:
        return key in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def items(self):
        return self._entries.items()


def _as_ast(query: Rpq | str) -> Rpq:
    return parse_rpq(query) if isinstance(query, str) else query


def join_concat(
    left: PairRelation, right: PairRelation, stats: EvalStats | None = None
) -> PairRelation:
    """Equi-join on ``left.end == right.start``, projected to (left.start, right.end)."""
    index = right.by_start()
    out: set[Pair] = set()
    probes = 0
    for a, b in left:
        ends = index.get(b)
        if not ends:
            continue
        probes += len(ends)
        for c in ends:
            out.add((a, c))
    if stats is not None:
        stats.join_probes += probes
    return PairRelation(out)


def _join_post(
    graph: LabeledGraph, prefix_pairs: Iterable[Pair], post: Rpq, stats: EvalStats
) -> set[Pair]:
    """Extend each (v_i, v_k) by paths matching ``post`` from v_k, with duplicate checks."""
    if isinstance(post, Epsilon):
        out = set(prefix_pairs)
        return out
    bound = bind(graph, post)
    memo: dict[int, set[int]] = {}
    out: set[Pair] = set()
    probes = checks = 0
    for vi, vk in prefix_pairs:
        ends = memo.get(vk)
        if ends is None:
            ends = bound.reach_from(vk)
            memo[vk] = ends
        probes += 1
        checks += len(ends)
        for vl in ends:
            out.add((vi, vl))
    stats.post_probes += probes
    stats.eq10_dup_checks += checks
    stats.traversal_steps += bound.expansions
    return out


def eval_batch_unit(
    pre_g: PairRelation,
    rtc: Rtc,
    cond: Condensation,
    kind: Kleene,
    post: Rpq,
    graph: LabeledGraph,
    stats: EvalStats | None = None,
) -> PairRelation:
    """Evaluate ``Pre . R^kind . Post`` from ``Pre_G`` and the RTC of ``R``.

    Pre pairs whose end vertex lies outside ``G_R`` are dropped; repeated
    (start, SCC) pairs are skipped before and after the RTC lookup; RTC hits
    expand into members without duplicate checks. For ``R*`` the expansion
    is seeded with ``Pre_G`` itself and so must check membership.
    """
    if stats is None:
        stats = EvalStats()
    t0 = time.perf_counter()
    scc_of = cond.scc_of
    members = cond.members
    reach = rtc.reach
    star = kind is Kleene.STAR

    eq7: set[tuple[int, int]] = set()
    eq8: set[tuple[int, int]] = set()
    eq9: list[Pair] = list(pre_g) if star else []
    eq9_seen: set[Pair] = set(eq9) if star else set()
    eq7_skips = eq8_skips = eq8_inserts = probes = 0

    for vi, vj in pre_g:
        sj = scc_of.get(vj)
        if sj is None:
            continue
        key = (vi, sj)
        if key in eq7:
            eq7_skips += 1
            continue
        eq7.add(key)
        targets = reach[sj]
        probes += len(targets)
        for sk in targets:
            key8 = (vi, sk)
            if key8 in eq8:
                eq8_skips += 1
                continue
            eq8.add(key8)
            eq8_inserts += 1
            mem = members[sk]
            probes += len(mem)
            if star:
                for vk in mem:
                    pair = (vi, vk)
                    if pair not in eq9_seen:
                        eq9_seen.add(pair)
                        eq9.append(pair)
            else:
                eq9.extend([(vi, vk) for vk in mem])
    t1 = time.perf_counter()

    if DEBUG_CHECKS and not star:
        assert len(set(eq9)) == len(eq9), "duplicate pair in unchecked expansion"

    stats.eq7_inserts += len(eq7)
    stats.eq7_dup_skips += eq7_skips
    stats.eq8_inserts += eq8_inserts
    stats.eq8_dup_skips += eq8_skips
    stats.eq9_pairs += len(eq9)
    stats.join_probes += probes
    stats.t_prejoin += t1 - t0
    return PairRelation(_join_post(graph, eq9, post, stats))


class _RtcSharing:
    def __init__(
        self, graph: LabeledGraph, cache: RtcCache, stats: EvalStats, max_clauses: int
    ) -> None:
        self.graph = graph
        self.cache = cache
        self.stats = stats
        self.max_clauses = max_clauses

    def evaluate(self, query: Rpq) -> PairRelation:
        results = []
        for clause in to_dnf(query, self.max_clauses):
            parts = decompose_clause(clause)
            if parts.kind is None:
                bound = bind(self.graph, parts.post)
                results.append(bound.evaluate())
                self.stats.traversal_steps += bound.expansions
                continue
            if isinstance(parts.pre, Epsilon):
                entry = self.rtc_for(parts.r)
                if parts.kind is Kleene.PLUS:
                    pre_g = PairRelation.identity(entry.cond.scc_of)
                else:
                    pre_g = PairRelation.identity(range(self.graph.vertex_count))
            else:
                pre_g = self.evaluate(parts.pre)
                entry = self.rtc_for(parts.r)
            results.append(
                eval_batch_unit(
                    pre_g, entry.rtc, entry.cond, parts.kind, parts.post, self.graph, self.stats
                )
            )
        if len(results) == 1:
            return results[0]
        return results[0].union(*results[1:])

    def rtc_for(self, r: Rpq) -> RtcEntry:
        key = canonical_text(r)
        entry = self.cache.get(key)
        if entry is not None:
            self.stats.cache_hits += 1
        else:
            r_g = self.evaluate(r)
            t0 = time.perf_counter()
            cond = condense(edge_level_reduce(r_g))
            entry = self.cache.insert(key, RtcEntry(compute_rtc(cond), cond))
            self.stats.t_shared += time.perf_counter() - t0
            self.stats.rtc_computations += 1
        self.stats.shared[key] = len(entry.rtc)
        return entry


def rtc_sharing(
    graph: LabeledGraph,
    query: Rpq | str,
    cache: RtcCache | None = None,
    stats: EvalStats | None = None,
    max_clauses: int = DEFAULT_MAX_CLAUSES,
) -> PairRelation:
    evaluator = _RtcSharing(
        graph,
        cache if cache is not None else RtcCache(),
        stats if stats is not None else EvalStats(),
        max_clauses,
    )
    return evaluator.evaluate(_as_ast(query))


class _FullSharing:
    def __init__(
        self,
        graph: LabeledGraph,
        shared: dict[str, PairRelation],
        stats: EvalStats,
        max_clauses: int,
    ) -> None:
        self.graph = graph
        self.shared = shared
        self.stats = stats
        self.max_clauses = max_clauses

    def evaluate(self, query: Rpq) -> PairRelation:
        results = []
        for clause in to_dnf(query, self.max_clauses):
            parts = decompose_clause(clause)
            if parts.kind is None:
                bound = bind(self.graph, parts.post)
                results.append(bound.evaluate())
                self.stats.traversal_steps += bound.expansions
                continue
            if isinstance(parts.pre, Epsilon):
                prefix = self.rplus_for(parts.r)
                if parts.kind is Kleene.STAR:
                    prefix = prefix.union(PairRelation.identity(range(self.graph.vertex_count)))
            else:
                pre_g = self.evaluate(parts.pre)
                rplus = self.rplus_for(parts.r)
                t0 = time.perf_counter()
                prefix = join_concat(pre_g, rplus, self.stats)
                if parts.kind is Kleene.STAR:
                    prefix = prefix.union(pre_g)
                self.stats.t_prejoin += time.perf_counter() - t0
            results.append(self.join_post(prefix, parts.post))
        if len(results) == 1:
            return results[0]
        return results[0].union(*results[1:])

    def join_post(self, prefix: PairRelation, post: Rpq) -> PairRelation:
        """Hash join with the whole of ``Post_G``, the unrestricted route."""
        if isinstance(post, Epsilon):
            return prefix
        bound = bind(self.graph, post)
        post_g = bound.evaluate()
        self.stats.traversal_steps += bound.expansions
        return join_concat(prefix, post_g, self.stats)

    def rplus_for(self, r: Rpq) -> PairRelation:
        key = canonical_text(r)
        rplus = self.shared.get(key)
        if rplus is not None:
            self.stats.cache_hits += 1
        else:
            r_g = self.evaluate(r)
            t0 = time.perf_counter()
            rplus = self.shared.setdefault(key, transitive_closure_bfs(edge_level_reduce(r_g)))
            self.stats.t_shared += time.perf_counter() - t0
            self.stats.rtc_computations += 1
        self.stats.shared[key] = len(rplus)
        return rplus


def full_sharing(
    graph: LabeledGraph,
    queries: Sequence[Rpq | str],
    shared: dict[str, PairRelation] | None = None,
    stats: list[EvalStats] | None = None,
    max_clauses: int = DEFAULT_MAX_CLAUSES,
) -> list[PairRelation]:
    """Evaluate queries sharing each closure's full ``R+_G`` relation.

    ``stats``, when given, receives one :class:`EvalStats` per query.
    """
    shared = shared if shared is not None else {}
    out = []
    for query in queries:
        s = EvalStats()
        out.append(_FullSharing(graph, shared, s, max_clauses).evaluate(_as_ast(query)))
        if stats is not None:
            stats.append(s)
    return out


def no_sharing(
    graph: LabeledGraph,
    queries: Sequence[Rpq | str],
    stats: list[EvalStats] | None = None,
) -> list[PairRelation]:
    """Evaluate every query independently with the product automaton."""
    out = []
    for query in queries:
        bound = bind(graph, _as_ast(query))
        out.append(bound.evaluate())
        if stats is not None:
            stats.append(EvalStats(traversal_steps=bound.expansions))
    return out


@dataclass
class QueryRun:
    query: str
    method: str
    result: PairRelation
    stats: EvalStats


def iter_workload(
    graph: LabeledGraph,
    queries: Sequence[str],
    method: str,
    cache: RtcCache | None = None,
    shared: dict[str, PairRelation] | None = None,
) -> Iterator[QueryRun]:
    """Run one method over a workload, yielding each query as it finishes.

    ``t_remainder`` is whatever part of the query time is neither shared-data
    construction nor the Pre x R+ join. Consumers that drop each result
    before asking for the next keep only one result in memory.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    asts = [parse_rpq(q) for q in queries]
    cache = cache if cache is not None else RtcCache()
    shared = shared if shared is not None else {}
    for text, ast in zip(queries, asts):
        stats = EvalStats()
        t0 = time.perf_counter()
        if method == "rtc":
            result = rtc_sharing(graph, ast, cache, stats)
        elif method == "full":
            result = _FullSharing(graph, shared, stats, DEFAULT_MAX_CLAUSES).evaluate(ast)
        else:
            bound = bind(graph, ast)
            result = bound.evaluate()
            stats.traversal_steps = bound.expansions
        stats.t_total = time.perf_counter() - t0
        stats.t_remainder = max(0.0, stats.t_total - stats.t_shared - stats.t_prejoin)
        yield QueryRun(text, method, result, stats)
        del result


def evaluate_workload(
    graph: LabeledGraph,
    queries: Sequence[str],
    method: str,
    cache: RtcCache | None = None,
    shared: dict[str, PairRelation] | None = None,
) -> list[QueryRun]:
    """Eager form of :func:`iter_workload`."""
    return list(iter_workload(graph, queries, method, cache, shared))
