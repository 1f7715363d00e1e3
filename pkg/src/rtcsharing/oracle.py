"""Brute-force RPQ evaluator by relational fixed points.

Deliberately naive and independent of the automaton evaluator and the
engine: every operator is computed as a whole relation, and closures are
iterated to a least fixed point. Meant for small graphs only.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import LabeledGraph, Pair, PairRelation
from .rpq import Alt, Concat, Epsilon, Label, Plus, Rpq, Star


class OracleRefusal(ValueError):
    """The graph is larger than the oracle is configured to accept."""


@dataclass(frozen=True)
class OracleConfig:
    max_vertices: int = 64

    def __post_init__(self) -> None:
        if self.max_vertices < 1:
            raise ValueError("max_vertices must be >= 1")


def _compose(left: set[Pair], right: set[Pair]) -> set[Pair]:
    after: dict[int, list[int]] = {}
    for c, d in right:
        after.setdefault(c, []).append(d)
    return {(a, d) for a, b in left for d in after.get(b, ())}


def _closure(base: set[Pair], trace: list[list[int]] | None) -> set[Pair]:
    current = set(base)
    sizes: list[int] = []
    if trace is not None:
        trace.append(sizes)
    while True:
        sizes.append(len(current))
        nxt = current | _compose(current, base)
        if nxt == current:
            return current
        current = nxt


def oracle_eval(
    graph: LabeledGraph,
    ast: Rpq,
    config: OracleConfig = OracleConfig(),
    trace: list[list[int]] | None = None,
) -> PairRelation:
    """Evaluate ``ast`` by structural recursion.

    ``trace``, when given, receives one list per closure evaluated, holding
    the pair count at each fixed-point iteration.
    """
    if graph.vertex_count > config.max_vertices:
        raise OracleRefusal(
            f"graph has {graph.vertex_count} vertices; oracle limit is {config.max_vertices}"
        )
    by_label: dict[str, set[Pair]] = {}
    for s, label, d in graph.named_edges():
        by_label.setdefault(label, set()).add((s, d))
    identity = {(v, v) for v in range(graph.vertex_count)}

    def ev(node: Rpq) -> set[Pair]:
        if isinstance(node, Label):
            return set(by_label.get(node.name, ()))
        if isinstance(node, Epsilon):
            return set(identity)
        if isinstance(node, Concat):
            acc = ev(node.children[0])
            for child in node.children[1:]:
                acc = _compose(acc, ev(child))
            return acc
        if isinstance(node, Alt):
            acc = set()
            for child in node.children:
                acc |= ev(child)
            return acc
        if isinstance(node, Plus):
            return _closure(ev(node.child), trace)
        if isinstance(node, Star):
            return _closure(ev(node.child), trace) | identity
        raise TypeError(f"not an RPQ node: {node!r}")

    return PairRelation(ev(ast))
