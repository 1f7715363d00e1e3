"""Edge-labeled directed multigraphs and the ordered-pair relation type."""

from __future__ import annotations

import hashlib
import re
from collections.abc import Iterable, Iterator
from pathlib import Path

import numpy as np

Pair = tuple[int, int]

# R-MAT quadrant probabilities (top-left, top-right, bottom-left; bottom-right is the rest)
RMAT_A = 0.57
RMAT_B = 0.19
RMAT_C = 0.19

_HEADER_RE = re.compile(r"#\s*vertices=(\d+)(?:\s+labels=(\S*))?")


class EdgeListError(ValueError):
    """Malformed edge-list input."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PairRelation:
    """A set of ordered (start, end) vertex pairs.

    The start-keyed index is built on first use and kept for the lifetime of
    the relation, so callers must not mutate the set they pass in.
    """

    __slots__ = ("_pairs", "_by_start")

    def __init__(self, pairs: Iterable[Pair] = ()) -> None:
        if isinstance(pairs, (set, frozenset)):
            self._pairs = pairs
        else:
            self._pairs = set(pairs)
        self._by_start: dict[int, tuple[int, ...]] | None = None

    @classmethod
    def identity(cls, vertices: Iterable[int]) -> PairRelation:
        return cls({(v, v) for v in vertices})

    @property
    def pairs(self) -> set[Pair] | frozenset[Pair]:
        return self._pairs

    def by_start(self) -> dict[int, tuple[int, ...]]:
        if self._by_start is None:
            index: dict[int, list[int]] = {}
            for s, e in self._pairs:
                index.setdefault(s, []).append(e)
            self._by_start = {s: tuple(sorted(ends)) for s, ends in index.items()}
        return self._by_start

    def successors(self, start: int) -> tuple[int, ...]:
        return self.by_start().get(start, ())

    def select_start(self, start: int) -> PairRelation:
        return PairRelation({(start, e) for e in self.successors(start)})

    def starts(self) -> set[int]:
        return {s for s, _ in self._pairs}

    def vertices(self) -> set[int]:
        out = set()
        for s, e in self._pairs:
            out.add(s)
            out.add(e)
        return out

    def union(self, *others: PairRelation) -> PairRelation:
        merged = set(self._pairs)
        for other in others:
            merged |= other.pairs
        return PairRelation(merged)

    def sorted(self) -> list[Pair]:
        return sorted(self._pairs)

    def digest(self) -> str:
        """Order-independent SHA-256 of the pair set.

        Lets callers compare multi-million-pair results without keeping
        more than one of them alive.
        """
        flat = np.fromiter(
            (v for pair in self._pairs for v in pair), dtype=np.int64, count=2 * len(self._pairs)
        ).reshape(-1, 2)
        order = np.lexsort((flat[:, 1], flat[:, 0]))
        return hashlib.sha256(np.ascontiguousarray(flat[order]).tobytes()).hexdigest()

    def __len__(self) -> int:
        return len(self._pairs)

    def __iter__(self) -> Iterator[Pair]:
        return iter(self._pairs)

    def __contains__(self, pair: object) -> bool:
        return pair in self._pairs

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PairRelation):
            return self._pairs == other._pairs
        if isinstance(other, (set, frozenset)):
            return self._pairs == other
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        shown = self.sorted()
        if len(shown) > 8:
            return f"PairRelation({shown[:8]!r} ... {len(shown)} pairs)"
        return f"PairRelation({shown!r})"


class LabeledGraph:
    """Immutable edge-labeled directed multigraph with dense vertex and label ids.

    ``labels`` is the alphabet in id order; edges are ``(src, label, dst)``
    triples naming labels by string. Parallel edges between the same pair of
    vertices are allowed only with distinct labels, so duplicate triples are
    collapsed.
    """

    def __init__(
        self,
        vertex_count: int,
        labels: Iterable[str],
        edges: Iterable[tuple[int, str, int]],
    ) -> None:
        if vertex_count < 0:
            raise ValueError("vertex_count must be non-negative")
        self.vertex_count = vertex_count
        self.label_names: tuple[str, ...] = tuple(labels)
        self.label_ids = {name: i for i, name in enumerate(self.label_names)}
        if len(self.label_ids) != len(self.label_names):
            raise ValueError("duplicate label in alphabet")

        triples = set()
        for src, label, dst in edges:
            lid = self.label_ids.get(label)
            if lid is None:
                raise ValueError(f"edge label {label!r} not in alphabet")
            if not (0 <= src < vertex_count and 0 <= dst < vertex_count):
                raise ValueError(f"edge ({src}, {label}, {dst}) out of vertex range")
            triples.add((src, lid, dst))
        self.edges: frozenset[tuple[int, int, int]] = frozenset(triples)

        out: list[dict[int, list[int]]] = [{} for _ in range(vertex_count)]
        counts = [0] * len(self.label_names)
        for src, lid, dst in sorted(triples):
            out[src].setdefault(lid, []).append(dst)
            counts[lid] += 1
        self._out: list[dict[int, tuple[int, ...]]] = [
            {lid: tuple(dsts) for lid, dsts in adj.items()} for adj in out
        ]
        self.label_counts: tuple[int, ...] = tuple(counts)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def label_id(self, name: str) -> int | None:
        return self.label_ids.get(name)

    def successors(self, vertex: int, label_id: int) -> tuple[int, ...]:
        return self._out[vertex].get(label_id, ())

    def out_labels(self, vertex: int) -> dict[int, tuple[int, ...]]:
        return self._out[vertex]

    def named_edges(self) -> list[tuple[int, str, int]]:
        return [(s, self.label_names[l], d) for s, l, d in sorted(self.edges)]

    def edges_with_label(self, name: str) -> PairRelation:
        lid = self.label_ids.get(name)
        if lid is None:
            return PairRelation()
        return PairRelation({(s, d) for s, l, d in self.edges if l == lid})

    def degree_per_label(self) -> float:
        """Average vertex degree per label, ``|E| / (|V| |Σ|)``."""
        if not self.vertex_count or not self.label_names:
            return 0.0
        return self.edge_count / (self.vertex_count * len(self.label_names))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return (
            self.vertex_count == other.vertex_count
            and set(self.label_names) == set(other.label_names)
            and set(self.named_edges()) == set(other.named_edges())
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return (
            f"LabeledGraph(|V|={self.vertex_count}, |E|={self.edge_count}, "
            f"Σ={list(self.label_names)})"
        )


def parse_edge_list(text: str) -> LabeledGraph:
    """Parse ``src<TAB>label<TAB>dst`` lines; runs of spaces also separate fields.

    An optional ``# vertices=N labels=a,b`` header fixes the vertex count and
    alphabet so isolated vertices and unused labels survive a round trip.
    """
    edges: list[tuple[int, str, int]] = []
    declared_vertices: int | None = None
    declared_labels: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _HEADER_RE.match(line)
            if m:
                declared_vertices = int(m.group(1))
                if m.group(2):
                    declared_labels = m.group(2).split(",")
            continue
        fields = line.split()
        if len(fields) != 3:
            raise EdgeListError(f"expected 3 fields, got {len(fields)}", lineno)
        src, label, dst = fields
        try:
            s, d = int(src), int(dst)
        except ValueError:
            raise EdgeListError(f"non-integer vertex id in {line!r}", lineno) from None
        if s < 0 or d < 0:
            raise EdgeListError(f"negative vertex id in {line!r}", lineno)
        edges.append((s, label, d))

    max_id = max((max(s, d) for s, _, d in edges), default=-1)
    vertex_count = max_id + 1
    if declared_vertices is not None:
        if declared_vertices < vertex_count:
            raise EdgeListError(
                f"header declares {declared_vertices} vertices but ids reach {max_id}"
            )
        vertex_count = declared_vertices
    labels = sorted(set(declared_labels) | {label for _, label, _ in edges})
    return LabeledGraph(vertex_count, labels, edges)


def load_edge_list(path: str | Path) -> LabeledGraph:
    return parse_edge_list(Path(path).read_text(encoding="utf-8"))


def format_edge_list(graph: LabeledGraph) -> str:
    lines = [f"# vertices={graph.vertex_count} labels={','.join(graph.label_names)}"]
    lines.extend(f"{s}\t{label}\t{d}" for s, label, d in graph.named_edges())
    return "\n".join(lines) + "\n"


def write_edge_list(graph: LabeledGraph, path: str | Path) -> None:
    Path(path).write_text(format_edge_list(graph), encoding="utf-8")


def label_names(count: int) -> list[str]:
    """Default alphabet for generated graphs: ``a`` .. ``z``, then ``l26`` onward."""
    letters = "abcdefghijklmnopqrstuvwxyz"
    return [letters[i] if i < len(letters) else f"l{i}" for i in range(count)]


def generate_rmat(
    scale: int,
    edge_factor: int,
    label_count: int,
    seed: int,
    labels: list[str] | None = None,
) -> LabeledGraph:
    """Sample an R-MAT graph with ``2**scale`` vertices.

    Draws ``2**(scale + edge_factor)`` edges by recursive quadrant descent,
    gives each a uniformly random label, and drops exact duplicate triples.
    """
    if scale < 1:
        raise ValueError("scale must be >= 1")
    if edge_factor < 0:
        raise ValueError("edge_factor must be >= 0")
    if label_count < 1:
        raise ValueError("label_count must be >= 1")
    names = labels if labels is not None else label_names(label_count)
    if len(names) != label_count:
        raise ValueError("labels must have label_count entries")

    rng = np.random.default_rng(seed)
    m = 1 << (scale + edge_factor)
    src = np.zeros(m, dtype=np.int64)
    dst = np.zeros(m, dtype=np.int64)
    for _ in range(scale):
        r = rng.random(m)
        right = ((r >= RMAT_A) & (r < RMAT_A + RMAT_B)) | (r >= RMAT_A + RMAT_B + RMAT_C)
        down = r >= RMAT_A + RMAT_B
        src = (src << 1) | down
        dst = (dst << 1) | right
    lids = rng.integers(0, label_count, size=m)
    edges = {(int(s), int(l), int(d)) for s, l, d in zip(src, lids, dst)}
    return LabeledGraph(1 << scale, names, ((s, names[l], d) for s, l, d in edges))
