from __future__ import annotations

import pytest
from hypothesis import given, settings

from rtcsharing.graph import LabeledGraph
from rtcsharing.oracle import oracle_eval
from rtcsharing.rpq import (
    EPSILON,
    Alt,
    ClauseExplosionError,
    Concat,
    Kleene,
    Label,
    Plus,
    RpqSyntaxError,
    Star,
    alt,
    canonical_text,
    concat,
    decompose_clause,
    has_closure,
    parse_query_file,
    parse_rpq,
    pretty,
    to_dnf,
)

from conftest import graphs, rpqs

a, b, c, d, x = (Label(n) for n in "abcdx")


@pytest.mark.parametrize(
    "text, expected",
    [
        ("a", a),
        ("d.(b.c)+.c", Concat((d, Plus(Concat((b, c))), c))),
        ("d·(b·c)+·c", Concat((d, Plus(Concat((b, c))), c))),
        (
            "(a.b)*.b+.(a.b+.c)+",
            Concat((Star(Concat((a, b))), Plus(b), Plus(Concat((a, Plus(b), c))))),
        ),
        ("a.b|c", Alt((Concat((a, b)), c))),
        ("a|b|c", Alt((a, b, c))),
        ("a.b+", Concat((a, Plus(b)))),
        ("a+*", Star(Plus(a))),
        ("((a))", a),
        (" a . b ", Concat((a, b))),
        ("foo_1.Bar", Concat((Label("foo_1"), Label("Bar")))),
    ],
)
def test_parse(text, expected):
    assert parse_rpq(text) == expected


@pytest.mark.parametrize(
    "text, offset, fragment",
    [
        ("", 0, "empty query"),
        ("(a.b", 0, "unbalanced '('"),
        ("a.b)", 3, "unbalanced ')'"),
        ("a.", 2, "dangling operator"),
        ("a.+", 2, "dangling operator"),
        ("+a", 0, "dangling operator"),
        ("a||b", 2, "empty alternation branch"),
        ("a|", 2, "empty alternation branch"),
        ("(a|)", 3, "empty alternation branch"),
        ("|a", 0, "empty alternation branch"),
        ("()", 1, "empty group"),
        ("a b", 2, "unexpected"),
        ("a.$", 2, "unexpected character"),
        ("a·$", 3, "unexpected character"),
    ],
)
def test_parse_errors_carry_byte_offsets(text, offset, fragment):
    with pytest.raises(RpqSyntaxError) as err:
        parse_rpq(text)
    assert err.value.offset == offset
    assert fragment in str(err.value)


def test_smart_constructors_flatten_and_drop_epsilon():
    assert concat(a, concat(b, c)) == Concat((a, b, c))
    assert concat(EPSILON, a, EPSILON) == a
    assert concat() == EPSILON
    assert alt(a, alt(b, c)) == Alt((a, b, c))
    assert alt(a) == a


def test_canonical_text():
    assert canonical_text(parse_rpq("b.c")) == "(b.c)"
    assert canonical_text(parse_rpq("b.c")) == canonical_text(parse_rpq("(b).(c)"))
    assert canonical_text(parse_rpq("a|b")) != canonical_text(parse_rpq("b|a"))
    assert canonical_text(parse_rpq("d.(b.c)+.c")) == "(d.(b.c)+.c)"
    assert pretty(parse_rpq("d.(b.c)+.c")) == "d.(b.c)+.c"


@given(rpqs())
def test_canonical_text_round_trips(node):
    assert parse_rpq(canonical_text(node)) == node
    assert parse_rpq(pretty(node)) == node


def test_parse_query_file_skips_comments_and_blanks():
    assert parse_query_file("# set 0\na.b+.c\n\n  d \n") == ["a.b+.c", "d"]


def test_dnf_examples():
    assert to_dnf(parse_rpq("(a|b).c+")) == [parse_rpq("a.c+"), parse_rpq("b.c+")]
    assert to_dnf(parse_rpq("d.(b.c)+.c")) == [parse_rpq("d.(b.c)+.c")]
    assert to_dnf(parse_rpq("(a|b).(c|d)")) == [parse_rpq(q) for q in ("a.c", "a.d", "b.c", "b.d")]


def test_dnf_keeps_closure_bodies_atomic_and_dedups():
    assert to_dnf(parse_rpq("(a|b)+")) == [parse_rpq("(a|b)+")]
    assert to_dnf(parse_rpq("a|a|b")) == [a, b]


def test_dnf_cap():
    query = parse_rpq(".".join(["(a|b)"] * 13))
    with pytest.raises(ClauseExplosionError):
        to_dnf(query)
    assert len(to_dnf(query, max_clauses=2**13)) == 2**13
    with pytest.raises(ClauseExplosionError):
        to_dnf(parse_rpq("a|b|c"), max_clauses=2)


def test_decompose_examples():
    clause = decompose_clause(parse_rpq("a.(a.b)+.b"))
    assert (clause.pre, clause.r, clause.kind, clause.post) == (a, Concat((a, b)), Kleene.PLUS, b)

    clause = decompose_clause(parse_rpq("(a.b)*.b+.(a.b+.c)+"))
    assert clause.pre == parse_rpq("(a.b)*.b+")
    assert clause.r == parse_rpq("a.b+.c")
    assert clause.kind is Kleene.PLUS
    assert clause.post == EPSILON

    clause = decompose_clause(a)
    assert (clause.pre, clause.r, clause.kind, clause.post) == (EPSILON, EPSILON, None, a)

    clause = decompose_clause(parse_rpq("(a.b)*.x"))
    assert (clause.pre, clause.kind, clause.post) == (EPSILON, Kleene.STAR, x)


def test_decompose_rejects_alternation():
    with pytest.raises(ValueError):
        decompose_clause(parse_rpq("a|b"))


@given(rpqs())
def test_decomposed_clauses_have_closure_free_post_and_reassemble(node):
    for clause in to_dnf(node):
        parts = decompose_clause(clause)
        assert not has_closure(parts.post)
        assert parts.reassemble() == clause
        if parts.kind is None:
            assert parts.r == EPSILON and parts.pre == EPSILON


@settings(max_examples=60, deadline=None)
@given(graphs(max_vertices=16, labels=("a", "b", "c")), rpqs(labels=("a", "b", "c"), max_leaves=6))
def test_dnf_union_matches_oracle(g, node):
    clauses = to_dnf(node)
    union = set()
    for clause in clauses:
        union |= oracle_eval(g, clause).pairs
    assert union == oracle_eval(g, node)


def test_dnf_of_two_alternations_on_star_graph():
    g = LabeledGraph(
        5, "abcd", [(0, "a", 1), (0, "b", 1), (1, "c", 2), (1, "d", 3), (4, "a", 4)]
    )
    node = parse_rpq("(a|b).(c|d)")
    union = set()
    for clause in to_dnf(node):
        union |= oracle_eval(g, clause).pairs
    assert union == oracle_eval(g, node) == {(0, 2), (0, 3)}
