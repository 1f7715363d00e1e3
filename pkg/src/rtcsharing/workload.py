"""Benchmark workloads and random (graph, query) instances."""

from __future__ import annotations

import random
from collections.abc import Sequence
from dataclasses import dataclass

from .graph import LabeledGraph, generate_rmat
from .rpq import Kleene, Label, Plus, Rpq, Star, alt, concat


@dataclass(frozen=True)
class Workload:
    """Queries ``pre . (r)+ . post`` sharing one closure body ``r``.

    Larger sets built from the same seed extend smaller ones, so the first
    ``k`` queries of a workload form the size-``k`` workload.
    """

    queries: tuple[str, ...]
    r: str
    r_length: int
    queries_per_set: int
    seed: int


def generate_workloads(
    labels: Sequence[str],
    r_lengths: Sequence[int],
    per_length: int,
    queries: int,
    seed: int,
) -> list[Workload]:
    rng = random.Random(seed)
    pairs_pool = [(p, q) for p in labels for q in labels]
    out = []
    for length in r_lengths:
        if not 1 <= length <= 3:
            raise ValueError("r lengths must be in 1..3")
        for _ in range(per_length):
            r = ".".join(rng.choice(labels) for _ in range(length))
            if queries <= len(pairs_pool):
                chosen = rng.sample(pairs_pool, queries)
            else:
                chosen = [rng.choice(pairs_pool) for _ in range(queries)]
            body = f"({r})" if length > 1 else r
            texts = tuple(f"{p}.{body}+.{q}" for p, q in chosen)
            out.append(Workload(texts, r, length, queries, seed))
    return out


def format_workloads(workloads: Sequence[Workload]) -> str:
    lines = []
    for i, w in enumerate(workloads):
        lines.append(
            f"# set {i}: r={w.r} r_length={w.r_length} queries={w.queries_per_set} seed={w.seed}"
        )
        lines.extend(w.queries)
    return "\n".join(lines) + "\n"


def random_word(rng: random.Random, labels: Sequence[str], lo: int, hi: int) -> Rpq:
    return concat(*(Label(rng.choice(labels)) for _ in range(rng.randint(lo, hi))))


def random_batch_unit(
    rng: random.Random,
    labels: Sequence[str],
    max_pre: int = 2,
    max_r: int = 3,
    max_post: int = 1,
    kinds: Sequence[Kleene] = (Kleene.PLUS, Kleene.STAR),
) -> Rpq:
    """``pre . r^kind . post`` with label words of bounded length; pre/post may be empty."""
    pre = random_word(rng, labels, 0, max_pre)
    r = random_word(rng, labels, 1, max_r)
    post = random_word(rng, labels, 0, max_post)
    kind = rng.choice(list(kinds))
    return concat(pre, Plus(r) if kind is Kleene.PLUS else Star(r), post)


def random_rpq(rng: random.Random, labels: Sequence[str], max_depth: int) -> Rpq:
    """Arbitrary RPQ over ``labels`` with nesting depth at most ``max_depth``."""
    if max_depth <= 1 or rng.random() < 0.3:
        return Label(rng.choice(labels))
    op = rng.choice(("concat", "concat", "alt", "plus", "star"))
    if op in ("plus", "star"):
        child = random_rpq(rng, labels, max_depth - 1)
        return Plus(child) if op == "plus" else Star(child)
    parts = [random_rpq(rng, labels, max_depth - 1) for _ in range(rng.randint(2, 3))]
    return concat(*parts) if op == "concat" else alt(*parts)


def random_graph(
    rng: random.Random,
    max_vertices: int,
    max_labels: int = 4,
    edge_factors: Sequence[int] = (0, 1, 2, 3),
) -> LabeledGraph:
    """A small R-MAT graph with at most ``max_vertices`` vertices."""
    max_scale = max(1, max_vertices.bit_length() - 1)
    scale = rng.randint(1, max_scale)
    label_count = rng.randint(1, max_labels)
    return generate_rmat(scale, rng.choice(list(edge_factors)), label_count, rng.randrange(2**32))

