"""Concrete syntax for formulas and input/output partitions.

Grammar, loosest to tightest: ``->`` (right associative), ``|``, ``&``,
``U``/``R`` (right associative), then the unary operators ``!``, ``X``,
``WX``, ``F``, ``G``.  Identifiers match ``[A-Za-z_][A-Za-z0-9_]*``; the
words ``true false X WX F G U R`` are reserved.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .formulas import (
    FALSE,
    TRUE,
    Always,
    And,
    Atom,
    Eventually,
    Formula,
    Implies,
    Next,
    Not,
    Or,
    Partition,
    Release,
    Until,
    WeakNext,
)

__all__ = ["ParseError", "parse_formula", "parse_partition", "format_partition"]


class ParseError(ValueError):
    """Syntax error with 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class _Token:
    kind: str  # 'name', 'op', 'end'
    text: str
    line: int
    column: int


_KEYWORDS = frozenset({"true", "false", "X", "WX", "F", "G", "U", "R"})
_TOKEN_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|->|[!&|()]")


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    lines = text.splitlines() or [""]
    for lineno, line in enumerate(lines, start=1):
        pos = 0
        while pos < len(line):
            if line[pos].isspace():
                pos += 1
                continue
            m = _TOKEN_RE.match(line, pos)
            if m is None:
                raise ParseError(f"unknown token {line[pos]!r}", lineno, pos + 1)
            word = m.group()
            kind = "name" if word[0].isalpha() or word[0] == "_" else "op"
            tokens.append(_Token(kind, word, lineno, pos + 1))
            pos = m.end()
    tokens.append(_Token("end", "", len(lines), len(lines[-1]) + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str) -> ParseError:
        tok = self.peek()
        return ParseError(message, tok.line, tok.column)

    def parse(self) -> Formula:
        f = self.implies()
        tok = self.peek()
        if tok.kind != "end":
            raise self.error(f"unexpected {tok.text!r} after formula")
        return f

    def implies(self) -> Formula:
        left = self.disjunction()
        if self.peek().text == "->":
            self.advance()
            return Implies(left, self.implies())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek().text == "|":
            self.advance()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.until()
        while self.peek().text == "&":
            self.advance()
            f = And(f, self.until())
        return f

    def until(self) -> Formula:
        left = self.unary()
        tok = self.peek()
        if tok.text == "U":
            self.advance()
            return Until(left, self.until())
        if tok.text == "R":
            self.advance()
            return Release(left, self.until())
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.text == "!":
            self.advance()
            return Not(self.unary())
        if tok.text == "X" and tok.kind == "name":
            self.advance()
            return Next(self.unary())
        if tok.text == "WX":
            self.advance()
            return WeakNext(self.unary())
        if tok.text == "F" and tok.kind == "name":
            self.advance()
            return Eventually(self.unary())
        if tok.text == "G" and tok.kind == "name":
            self.advance()
            return Always(self.unary())
        return self.primary()

    def primary(self) -> Formula:
        tok = self.peek()
        if tok.text == "(":
            self.advance()
            f = self.implies()
            if self.peek().text != ")":
                raise self.error("expected ')'")
            self.advance()
            return f
        if tok.text == "true":
            self.advance()
            return TRUE
        if tok.text == "false":
            self.advance()
            return FALSE
        if tok.kind == "name":
            if tok.text in _KEYWORDS:
                raise self.error(f"operator {tok.text!r} needs an operand")
            self.advance()
            return Atom(tok.text)
        if tok.kind == "end":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected {tok.text!r}")


def parse_formula(text: str) -> Formula:
    """Parse a single formula from ``text``."""
    return _Parser(_tokenize(text)).parse()


def parse_partition(text: str) -> Partition:
    """Parse a partition file: one ``.inputs:`` and one ``.outputs:`` line.

    Either side may be empty.  Atom order within a line is preserved.
    """
    inputs: tuple[str, ...] | None = None
    outputs: tuple[str, ...] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith(".inputs:"):
            if inputs is not None:
                raise ParseError("duplicate .inputs line", lineno, 1)
            inputs = tuple(line[len(".inputs:"):].split())
        elif line.startswith(".outputs:"):
            if outputs is not None:
                raise ParseError("duplicate .outputs line", lineno, 1)
            outputs = tuple(line[len(".outputs:"):].split())
        else:
            raise ParseError(f"unrecognized line {line!r}", lineno, 1)
    if inputs is None:
        raise ParseError("missing .inputs line", 1, 1)
    if outputs is None:
        raise ParseError("missing .outputs line", 1, 1)
    return Partition(inputs, outputs)


def format_partition(p: Partition) -> str:
    return f".inputs: {' '.join(p.inputs)}\n.outputs: {' '.join(p.outputs)}\n"
