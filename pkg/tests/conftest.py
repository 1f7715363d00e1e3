from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import strategies as st

from rtcsharing import engine
from rtcsharing.graph import LabeledGraph, load_edge_list
from rtcsharing.rpq import Label, Plus, Star, alt, concat

DATA = Path(__file__).parent / "data"
LABELS = ("a", "b", "c", "d")

# Acceptance outcomes collected during the run; printed in the terminal summary.
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


# Every test run also asserts the unchecked ResEq9 expansion has no duplicates.
engine.DEBUG_CHECKS = True


@pytest.fixture(scope="session")
def sample_graph() -> LabeledGraph:
    return load_edge_list(DATA / "sample_graph.tsv")


@st.composite
def graphs(draw, max_vertices: int = 8, labels: tuple[str, ...] = LABELS, max_edges: int = 24):
    n = draw(st.integers(1, max_vertices))
    edge = st.tuples(st.integers(0, n - 1), st.sampled_from(labels), st.integers(0, n - 1))
    edges = draw(st.lists(edge, max_size=max_edges))
    return LabeledGraph(n, labels, edges)


def label_words(lo: int, hi: int, labels: tuple[str, ...] = LABELS):
    return st.lists(st.sampled_from(labels).map(Label), min_size=lo, max_size=hi).map(
        lambda parts: concat(*parts)
    )


@st.composite
def batch_units(draw, labels: tuple[str, ...] = LABELS):
    pre = draw(label_words(0, 2, labels))
    r = draw(label_words(1, 3, labels))
    post = draw(label_words(0, 1, labels))
    closure = draw(st.sampled_from((Plus, Star)))
    return concat(pre, closure(r), post)


def rpqs(labels: tuple[str, ...] = LABELS, max_leaves: int = 8):
    leaves = st.sampled_from(labels).map(Label)

    def extend(children):
        many = st.lists(children, min_size=2, max_size=3)
        return st.one_of(
            many.map(lambda cs: concat(*cs)),
            many.map(lambda cs: alt(*cs)),
            children.map(Plus),
            children.map(Star),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
