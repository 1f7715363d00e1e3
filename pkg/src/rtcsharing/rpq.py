"""Regular path query syntax: AST, parser, DNF conversion and batch-unit decomposition.

Grammar (loosest to tightest binding)::

    alt     := concat ('|' concat)*
    concat  := postfix (('.' | '·') postfix)*
    postfix := atom ('+' | '*')*
    atom    := LABEL | '(' alt ')'
    LABEL   := [A-Za-z_][A-Za-z0-9_]*

Concatenation and alternation are flattened on construction, and epsilon is
dropped from concatenations, so structurally equal ASTs print identically.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Union

DEFAULT_MAX_CLAUSES = 4096


class RpqSyntaxError(ValueError):
    """Raised for malformed query text; ``offset`` is a UTF-8 byte offset."""

    def __init__(self, message: str, text: str, char_index: int) -> None:
        self.offset = len(text[:char_index].encode("utf-8"))
        self.text = text
        super().__init__(f"{message} at byte {self.offset}")


class ClauseExplosionError(ValueError):
    pass


@dataclass(frozen=True)
class Label:
    name: str


@dataclass(frozen=True)
class Epsilon:
    pass


@dataclass(frozen=True)
class Concat:
    children: tuple[Rpq, ...]


@dataclass(frozen=True)
class Alt:
    children: tuple[Rpq, ...]


@dataclass(frozen=True)
class Plus:
    child: Rpq


@dataclass(frozen=True)
class Star:
    child: Rpq


Rpq = Union[Label, Epsilon, Concat, Alt, Plus, Star]
EPSILON = Epsilon()


class Kleene(enum.Enum):
    PLUS = "+"
    STAR = "*"


def concat(*parts: Rpq) -> Rpq:
    """Concatenate, flattening nested concatenations and dropping epsilon."""
    flat: list[Rpq] = []
    for part in parts:
        if isinstance(part, Concat):
            flat.extend(part.children)
        elif not isinstance(part, Epsilon):
            flat.append(part)
    if not flat:
        return EPSILON
    if len(flat) == 1:
        return flat[0]
    return Concat(tuple(flat))


def alt(*parts: Rpq) -> Rpq:
    flat: list[Rpq] = []
    for part in parts:
        if isinstance(part, Alt):
            flat.extend(part.children)
        else:
            flat.append(part)
    if not flat:
        raise ValueError("alternation needs at least one branch")
    if len(flat) == 1:
        return flat[0]
    return Alt(tuple(flat))


def is_closure(node: Rpq) -> bool:
    return isinstance(node, (Plus, Star))


def has_closure(node: Rpq) -> bool:
    if isinstance(node, (Plus, Star)):
        return True
    if isinstance(node, (Concat, Alt)):
        return any(has_closure(c) for c in node.children)
    return False


def labels_of(node: Rpq) -> set[str]:
    if isinstance(node, Label):
        return {node.name}
    if isinstance(node, (Concat, Alt)):
        return set().union(*(labels_of(c) for c in node.children))
    if isinstance(node, (Plus, Star)):
        return labels_of(node.child)
    return set()


def literal_count(node: Rpq) -> int:
    """Number of label occurrences; bounds path length for closure-free queries."""
    if isinstance(node, Label):
        return 1
    if isinstance(node, (Concat, Alt)):
        return sum(literal_count(c) for c in node.children)
    if isinstance(node, (Plus, Star)):
        return literal_count(node.child)
    return 0


# -- parsing -----------------------------------------------------------------


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "|+*()":
            tokens.append((ch, ch, i))
            i += 1
        elif ch in ".·":
            tokens.append((".", ch, i))
            i += 1
        elif ch.isascii() and (ch.isalpha() or ch == "_"):
            j = i + 1
            while j < len(text) and text[j].isascii() and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("label", text[i:j], i))
            i = j
        else:
            raise RpqSyntaxError(f"unexpected character {ch!r}", text, i)
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok: tuple[str, str, int]) -> RpqSyntaxError:
        return RpqSyntaxError(message, self.text, tok[2])

    def parse(self) -> Rpq:
        if self.peek()[0] == "end":
            raise self.error("empty query", self.peek())
        node = self.parse_alt()
        tok = self.peek()
        if tok[0] == ")":
            raise self.error("unbalanced ')'", tok)
        if tok[0] != "end":
            raise self.error(f"unexpected {tok[1]!r}", tok)
        return node

    def parse_alt(self) -> Rpq:
        branches = [self.parse_concat()]
        while self.peek()[0] == "|":
            self.take()
            if self.peek()[0] in ("|", ")", "end"):
                raise self.error("empty alternation branch", self.peek())
            branches.append(self.parse_concat())
        return alt(*branches)

    def parse_concat(self) -> Rpq:
        parts = [self.parse_postfix()]
        while self.peek()[0] == ".":
            self.take()
            parts.append(self.parse_postfix())
        return concat(*parts)

    def parse_postfix(self) -> Rpq:
        node = self.parse_atom()
        while self.peek()[0] in ("+", "*"):
            kind = self.take()[0]
            node = Plus(node) if kind == "+" else Star(node)
        return node

    def parse_atom(self) -> Rpq:
        tok = self.peek()
        kind = tok[0]
        if kind == "label":
            self.take()
            return Label(tok[1])
        if kind == "(":
            self.take()
            if self.peek()[0] == ")":
                raise self.error("empty group", self.peek())
            node = self.parse_alt()
            close = self.peek()
            if close[0] != ")":
                raise self.error("unbalanced '('", tok)
            self.take()
            return node
        if kind == "end":
            raise self.error("dangling operator: expected a label or '('", tok)
        if kind == "|":
            raise self.error("empty alternation branch", tok)
        if kind == ")":
            raise self.error("unbalanced ')'", tok)
        raise self.error(f"dangling operator {tok[1]!r}", tok)


def parse_rpq(text: str) -> Rpq:
    return _Parser(text).parse()


def parse_query_file(text: str) -> list[str]:
    """Query file lines: one RPQ per line, ``#`` starts a comment line."""
    out = []
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out


# -- rendering ---------------------------------------------------------------


def canonical_text(node: Rpq) -> str:
    """Fully parenthesized rendering used as a cache key.

    Concatenations and alternations are always wrapped in parentheses so the
    result is identical for structurally equal ASTs and parses back to the
    same tree. Alternation order is kept as written.
    """
    if isinstance(node, Label):
        return node.name
    if isinstance(node, Epsilon):
        return "ε"
    if isinstance(node, Concat):
        return "(" + ".".join(canonical_text(c) for c in node.children) + ")"
    if isinstance(node, Alt):
        return "(" + "|".join(canonical_text(c) for c in node.children) + ")"
    if isinstance(node, Plus):
        return canonical_text(node.child) + "+"
    if isinstance(node, Star):
        return canonical_text(node.child) + "*"
    raise TypeError(f"not an RPQ node: {node!r}")


def pretty(node: Rpq) -> str:
    """Human-oriented rendering without redundant outer parentheses."""
    text = canonical_text(node)
    if isinstance(node, (Concat, Alt)):
        return text[1:-1]
    return text


# -- DNF and decomposition -----------------------------------------------------


def to_dnf(node: Rpq, max_clauses: int = DEFAULT_MAX_CLAUSES) -> list[Rpq]:
    """Distribute concatenation over alternation, keeping closures atomic.

    Returns the clauses in left-to-right distribution order with structural
    duplicates removed.
    """

    def expand(n: Rpq) -> list[Rpq]:
        if isinstance(n, Alt):
            out: list[Rpq] = []
            for child in n.children:
                out.extend(expand(child))
                if len(out) > max_clauses:
                    raise ClauseExplosionError(
                        f"DNF exceeds {max_clauses} clauses for {pretty(node)}"
                    )
            return out
        if isinstance(n, Concat):
            groups = [expand(child) for child in n.children]
            total = 1
            for g in groups:
                total *= len(g)
            if total > max_clauses:
                raise ClauseExplosionError(
                    f"DNF would have {total} clauses (cap {max_clauses}) for {pretty(node)}"
                )
            return [concat(*combo) for combo in itertools.product(*groups)]
        return [n]

    return list(dict.fromkeys(expand(node)))


@dataclass(frozen=True)
class Clause:
    """A batch unit ``pre . r^kind . post`` with ``r^kind`` its rightmost closure."""

    pre: Rpq
    r: Rpq
    kind: Kleene | None
    post: Rpq

    def reassemble(self) -> Rpq:
        if self.kind is None:
            return self.post
        closure = Plus(self.r) if self.kind is Kleene.PLUS else Star(self.r)
        return concat(self.pre, closure, self.post)


def decompose_clause(clause: Rpq) -> Clause:
    if isinstance(clause, Alt):
        raise ValueError("decompose_clause expects a single DNF clause, got an alternation")
    parts = clause.children if isinstance(clause, Concat) else (clause,)
    for i in range(len(parts) - 1, -1, -1):
        part = parts[i]
        if isinstance(part, (Plus, Star)):
            kind = Kleene.PLUS if isinstance(part, Plus) else Kleene.STAR
            result = Clause(concat(*parts[:i]), part.child, kind, concat(*parts[i + 1 :]))
            break
    else:
        result = Clause(EPSILON, EPSILON, None, clause)
    if has_closure(result.post):
        # only reachable with an alternation hiding a closure, i.e. not a DNF clause
        raise ValueError(f"{pretty(clause)} is not a DNF clause")
    return result
