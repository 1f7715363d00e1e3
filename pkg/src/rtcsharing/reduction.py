"""Two-level graph reduction and the reduced transitive closure (RTC).

``R_G`` (the pairs connected by a path matching ``R``) becomes the edge set of
an unlabeled simple graph ``G_R``. Collapsing each strongly connected
component of ``G_R`` gives the condensed graph, whose transitive closure is
the RTC. Expanding every RTC pair into the Cartesian product of its two
member sets gives back ``R+_G`` exactly.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field

from .graph import Pair, PairRelation

# Condensed graphs up to this many SCCs keep reachability sets as int bitsets.
BITSET_LIMIT = 4096


@dataclass(frozen=True)
class ReducedGraph:
    """Unlabeled simple directed graph; self-loops allowed."""

    vertices: tuple[int, ...]
    edges: frozenset[Pair]
    succ: dict[int, tuple[int, ...]] = field(compare=False, repr=False)

    @classmethod
    def from_edges(cls, edges: Iterable[Pair]) -> ReducedGraph:
        edge_set = frozenset(edges)
        succ: dict[int, list[int]] = {}
        verts = set()
        for s, d in edge_set:
            succ.setdefault(s, []).append(d)
            verts.add(s)
            verts.add(d)
        return cls(
            tuple(sorted(verts)),
            edge_set,
            {s: tuple(sorted(ds)) for s, ds in succ.items()},
        )

    def successors(self, v: int) -> tuple[int, ...]:
        return self.succ.get(v, ())


@dataclass(frozen=True)
class Condensation:
    """SCCs of a reduced graph, numbered in Tarjan completion order.

    Completion order is a reverse topological order: every condensed edge
    ``(s, t)`` with ``s != t`` has ``t < s``.
    """

    scc_of: dict[int, int]
    members: tuple[tuple[int, ...], ...]
    condensed_edges: frozenset[Pair]

    @property
    def scc_count(self) -> int:
        return len(self.members)

    def condensed_succ(self) -> list[tuple[int, ...]]:
        succ: list[list[int]] = [[] for _ in self.members]
        for s, t in self.condensed_edges:
            succ[s].append(t)
        return [tuple(sorted(ts)) for ts in succ]

    def has_self_loop(self, scc: int) -> bool:
        return (scc, scc) in self.condensed_edges


@dataclass(frozen=True)
class Rtc:
    """Transitive closure of a condensed graph, stored as per-SCC reachable lists."""

    reach: tuple[tuple[int, ...], ...]

    def successors(self, scc: int) -> tuple[int, ...]:
        return self.reach[scc]

    @property
    def pairs(self) -> frozenset[Pair]:
        return frozenset((s, t) for s, ts in enumerate(self.reach) for t in ts)

    def __len__(self) -> int:
        return sum(len(ts) for ts in self.reach)


def edge_level_reduce(r_g: PairRelation | Iterable[Pair]) -> ReducedGraph:
    return ReducedGraph.from_edges(r_g)


def condense(gr: ReducedGraph) -> Condensation:
    """Iterative Tarjan SCC; vertices and successors are visited in ascending order."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    scc_of: dict[int, int] = {}
    members: list[tuple[int, ...]] = []
    counter = 0

    for root in gr.vertices:
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(gr.successors(root)))]
        while work:
            v, it = work[-1]
            descended = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(gr.successors(w))))
                    descended = True
                    break
                if w in on_stack and index[w] < low[v]:
                    low[v] = index[w]
            if descended:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                sid = len(members)
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    scc_of[w] = sid
                    comp.append(w)
                    if w == v:
                        break
                members.append(tuple(sorted(comp)))

    condensed = frozenset((scc_of[s], scc_of[d]) for s, d in gr.edges)
    return Condensation(scc_of, tuple(members), condensed)


def compute_rtc(cond: Condensation, bitset_limit: int = BITSET_LIMIT) -> Rtc:
    """Reachability-set union over the condensed DAG in reverse topological order.

    An SCC reaches itself only through its own self-loop; acyclicity of the
    remaining edges rules out any other route back.
    """
    succ = cond.condensed_succ()
    n = cond.scc_count
    if n <= bitset_limit:
        bits = [0] * n
        for s in range(n):
            acc = 0
            for t in succ[s]:
                if t == s:
                    acc |= 1 << s
                else:
                    acc |= bits[t] | (1 << t)
            bits[s] = acc
        return Rtc(tuple(_bits_to_ids(b) for b in bits))

    reach: list[tuple[int, ...]] = []
    for s in range(n):
        acc: set[int] = set()
        for t in succ[s]:
            acc.add(t)
            if t != s:
                acc.update(reach[t])
        reach.append(tuple(sorted(acc)))
    return Rtc(tuple(reach))


def _bits_to_ids(bits: int) -> tuple[int, ...]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return tuple(out)


def expand_rtc(rtc: Rtc, cond: Condensation) -> PairRelation:
    """Union of ``members[s] x members[t]`` over RTC pairs.

    Member sets are disjoint, so the products never overlap and are emitted
    without membership checks.
    """
    members = cond.members
    out: list[Pair] = []
    for s, targets in enumerate(rtc.reach):
        if not targets:
            continue
        ms = members[s]
        for t in targets:
            mt = members[t]
            out.extend((u, w) for u in ms for w in mt)
    return PairRelation(set(out))


def transitive_closure_bfs(gr: ReducedGraph) -> PairRelation:
    """Plain per-vertex BFS closure of ``G_R``; the route used without reduction."""
    pairs: set[Pair] = set()
    for source in gr.vertices:
        seen: set[int] = set()
        frontier = list(gr.successors(source))
        seen.update(frontier)
        while frontier:
            nxt = []
            for v in frontier:
                for w in gr.successors(v):
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        pairs.update((source, w) for w in seen)
    return PairRelation(pairs)


def format_reduction(gr: ReducedGraph, cond: Condensation, rtc: Rtc) -> str:
    """Tab-separated dump of ``G_R``, SCC membership, condensed edges and the RTC."""
    lines = [f"# reduced graph: {len(gr.vertices)} vertices, {len(gr.edges)} edges"]
    lines.extend(f"edge\t{s}\t{d}" for s, d in sorted(gr.edges))
    lines.append(f"# condensation: {cond.scc_count} sccs")
    lines.extend(f"scc\t{v}\t{cond.scc_of[v]}" for v in gr.vertices)
    lines.extend(f"cedge\t{s}\t{t}" for s, t in sorted(cond.condensed_edges))
    lines.append(f"# rtc: {len(rtc)} pairs")
    lines.extend(f"rtc\t{s}\t{t}" for s, t in sorted(rtc.pairs))
    return "\n".join(lines) + "\n"
