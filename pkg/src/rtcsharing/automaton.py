"""NFA compilation and product-automaton evaluation of RPQs over a labeled graph."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import lru_cache

from .graph import LabeledGraph, PairRelation
from .rpq import Alt, Concat, Epsilon, Label, Plus, Rpq, Star


@dataclass(frozen=True)
class Nfa:
    """Epsilon-free NFA; transitions are ``(state, label, state)`` with label names."""

    states: int
    start: int
    accepts: frozenset[int]
    transitions: frozenset[tuple[int, str, int]]

    def __post_init__(self) -> None:
        if not 0 <= self.start < self.states:
            raise ValueError("start state out of range")
        for p, _, q in self.transitions:
            if not (0 <= p < self.states and 0 <= q < self.states):
                raise ValueError("transition endpoint out of range")

    def delta(self) -> list[dict[str, tuple[int, ...]]]:
        table: list[dict[str, list[int]]] = [{} for _ in range(self.states)]
        for p, label, q in sorted(self.transitions):
            table[p].setdefault(label, []).append(q)
        return [{a: tuple(qs) for a, qs in row.items()} for row in table]

    def accepts_word(self, word: Sequence[str]) -> bool:
        table = self.delta()
        current = {self.start}
        for symbol in word:
            current = {q for p in current for q in table[p].get(symbol, ())}
            if not current:
                return False
        return bool(current & self.accepts)


class _Thompson:
    def __init__(self) -> None:
        self.count = 0
        self.eps: dict[int, list[int]] = {}
        self.sym: list[tuple[int, str, int]] = []

    def new_state(self) -> int:
        self.count += 1
        return self.count - 1

    def link(self, p: int, q: int) -> None:
        self.eps.setdefault(p, []).append(q)

    def build(self, node: Rpq) -> tuple[int, int]:
        if isinstance(node, Label):
            s, e = self.new_state(), self.new_state()
            self.sym.append((s, node.name, e))
            return s, e
        if isinstance(node, Epsilon):
            s, e = self.new_state(), self.new_state()
            self.link(s, e)
            return s, e
        if isinstance(node, Concat):
            frags = [self.build(c) for c in node.children]
            for (_, end), (start, _) in zip(frags, frags[1:]):
                self.link(end, start)
            return frags[0][0], frags[-1][1]
        if isinstance(node, Alt):
            s, e = self.new_state(), self.new_state()
            for child in node.children:
                cs, ce = self.build(child)
                self.link(s, cs)
                self.link(ce, e)
            return s, e
        if isinstance(node, (Plus, Star)):
            s, e = self.new_state(), self.new_state()
            cs, ce = self.build(node.child)
            self.link(s, cs)
            self.link(ce, cs)
            self.link(ce, e)
            if isinstance(node, Star):
                self.link(s, e)
            return s, e
        raise TypeError(f"not an RPQ node: {node!r}")

    def closure(self, state: int) -> set[int]:
        seen = {state}
        stack = [state]
        while stack:
            p = stack.pop()
            for q in self.eps.get(p, ()):
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        return seen


@lru_cache(maxsize=1024)
def compile_nfa(ast: Rpq) -> Nfa:
    """Thompson construction followed by epsilon elimination and trimming."""
    t = _Thompson()
    start, final = t.build(ast)
    closures = [t.closure(p) for p in range(t.count)]
    by_source: dict[int, list[tuple[str, int]]] = {}
    for p, a, q in t.sym:
        by_source.setdefault(p, []).append((a, q))

    moves: list[set[tuple[str, int]]] = []
    accepting: list[bool] = []
    for p in range(t.count):
        row = set()
        for q in closures[p]:
            row.update(by_source.get(q, ()))
        moves.append(row)
        accepting.append(final in closures[p])

    # keep states reachable from start and able to reach acceptance
    order = [start]
    reach = {start}
    for p in order:
        for _, q in sorted(moves[p]):
            if q not in reach:
                reach.add(q)
                order.append(q)
    alive = {p for p in reach if accepting[p]}
    changed = True
    while changed:
        changed = False
        for p in reach - alive:
            if any(q in alive for _, q in moves[p]):
                alive.add(p)
                changed = True
    if start not in alive:
        return Nfa(1, 0, frozenset(), frozenset())
    kept = [p for p in order if p in alive]
    number = {p: i for i, p in enumerate(kept)}
    transitions = frozenset(
        (number[p], a, number[q]) for p in kept for a, q in moves[p] if q in alive
    )
    accepts = frozenset(number[p] for p in kept if accepting[p])
    return Nfa(len(kept), 0, accepts, transitions)


class BoundNfa:
    """An NFA resolved against one graph's label ids, ready for traversal.

    ``expansions`` accumulates the number of (vertex, state) pairs expanded
    across every traversal run through this object.
    """

    def __init__(self, graph: LabeledGraph, nfa: Nfa) -> None:
        self.graph = graph
        self.nfa = nfa
        self.states = nfa.states
        self.start = nfa.start
        self.accepting = [q in nfa.accepts for q in range(nfa.states)]
        self.delta: list[tuple[tuple[int, tuple[int, ...]], ...]] = []
        for row in nfa.delta():
            resolved = []
            for label, targets in sorted(row.items()):
                lid = graph.label_id(label)
                if lid is not None:
                    resolved.append((lid, targets))
            self.delta.append(tuple(resolved))
        self.expansions = 0

    def reach_from(self, source: int) -> set[int]:
        """End vertices of accepted paths from ``source``, by breadth-first product search."""
        nq = self.states
        delta = self.delta
        accepting = self.accepting
        graph = self.graph
        seen = {source * nq + self.start}
        frontier = [(source, self.start)]
        ends: set[int] = set()
        expanded = 0
        while frontier:
            nxt = []
            for v, q in frontier:
                expanded += 1
                if accepting[q]:
                    ends.add(v)
                moves = delta[q]
                if not moves:
                    continue
                adj = graph.out_labels(v)
                for lid, targets in moves:
                    dsts = adj.get(lid)
                    if not dsts:
                        continue
                    for w in dsts:
                        base = w * nq
                        for r in targets:
                            key = base + r
                            if key not in seen:
                                seen.add(key)
                                nxt.append((w, r))
            frontier = nxt
        self.expansions += expanded
        return ends

    def evaluate(self, sources: Iterable[int] | None = None) -> PairRelation:
        if sources is None:
            sources = range(self.graph.vertex_count)
        pairs = set()
        for s in sources:
            for e in self.reach_from(s):
                pairs.add((s, e))
        return PairRelation(pairs)


def bind(graph: LabeledGraph, ast: Rpq) -> BoundNfa:
    return BoundNfa(graph, compile_nfa(ast))


def eval_rpq_without_kc(graph: LabeledGraph, ast: Rpq) -> PairRelation:
    """Evaluate ``ast`` from every vertex of ``graph``.

    Named for its role on closure-free clauses, but closures are handled too,
    which is how the no-sharing baseline evaluates whole queries.
    """
    return bind(graph, ast).evaluate()


def eval_restricted_rpq(graph: LabeledGraph, post: Rpq, source: int) -> PairRelation:
    if isinstance(post, Epsilon):
        return PairRelation({(source, source)})
    return bind(graph, post).evaluate((source,))
