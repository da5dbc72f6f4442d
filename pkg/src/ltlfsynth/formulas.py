"""Formulas of linear temporal logic interpreted over finite traces.

The abstract syntax keeps ``Implies``, ``Eventually`` and ``Always`` as
first-class nodes so parsed input stays readable; :func:`to_nnf` eliminates
them.  Formula objects are immutable and compare structurally, so they can
be used as dictionary keys and set members.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import AbstractSet, Iterable, Sequence

__all__ = [
    "Formula",
    "TrueF",
    "FalseF",
    "Atom",
    "Not",
    "And",
    "Or",
    "Implies",
    "Next",
    "WeakNext",
    "Until",
    "Release",
    "Eventually",
    "Always",
    "TRUE",
    "FALSE",
    "Trace",
    "Partition",
    "atoms_of",
    "to_nnf",
    "is_nnf",
    "eval_trace",
    "as_trace",
    "format_formula",
    "formula_key",
]


@dataclass(frozen=True)
class Formula:
    """Base node type.  Concrete formulas are the subclasses below."""

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class TrueF(Formula):
    pass


@dataclass(frozen=True)
class FalseF(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Next(Formula):
    operand: Formula


@dataclass(frozen=True)
class WeakNext(Formula):
    operand: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Release(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Eventually(Formula):
    operand: Formula


@dataclass(frozen=True)
class Always(Formula):
    operand: Formula


TRUE = TrueF()
FALSE = FalseF()

#: A finite trace is a sequence of steps, each step the set of atoms true there.
Trace = Sequence[AbstractSet[str]]

_BINARY = (And, Or, Implies, Until, Release)
_UNARY = (Not, Next, WeakNext, Eventually, Always)


def as_trace(steps: Iterable[Iterable[str]]) -> tuple[frozenset[str], ...]:
    """Normalize an iterable of atom collections into a trace."""
    return tuple(frozenset(step) for step in steps)


def atoms_of(f: Formula) -> frozenset[str]:
    """The set of atom names occurring in ``f``."""
    found: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            found.add(g.name)
        elif isinstance(g, _BINARY):
            stack.append(g.left)
            stack.append(g.right)
        elif isinstance(g, _UNARY):
            stack.append(g.operand)
    return frozenset(found)


def to_nnf(f: Formula) -> Formula:
    """Negation normal form.

    Negations are pushed onto atoms, ``Implies`` is expanded, and
    ``Eventually``/``Always`` are rewritten through their Until/Release
    fixpoint forms.  The result uses only True/False, literals, And, Or,
    Next, WeakNext, Until and Release.
    """
    if isinstance(f, (TrueF, FalseF, Atom)):
        return f
    if isinstance(f, Not):
        return _nnf_negated(f.operand)
    if isinstance(f, And):
        return And(to_nnf(f.left), to_nnf(f.right))
    if isinstance(f, Or):
        return Or(to_nnf(f.left), to_nnf(f.right))
    if isinstance(f, Implies):
        return Or(_nnf_negated(f.left), to_nnf(f.right))
    if isinstance(f, Next):
        return Next(to_nnf(f.operand))
    if isinstance(f, WeakNext):
        return WeakNext(to_nnf(f.operand))
    if isinstance(f, Until):
        return Until(to_nnf(f.left), to_nnf(f.right))
    if isinstance(f, Release):
        return Release(to_nnf(f.left), to_nnf(f.right))
    if isinstance(f, Eventually):
        return Until(TRUE, to_nnf(f.operand))
    if isinstance(f, Always):
        return Release(FALSE, to_nnf(f.operand))
    raise TypeError(f"not a formula: {f!r}")


def _nnf_negated(f: Formula) -> Formula:
    """NNF of ``Not(f)``."""
    if isinstance(f, TrueF):
        return FALSE
    if isinstance(f, FalseF):
        return TRUE
    if isinstance(f, Atom):
        return Not(f)
    if isinstance(f, Not):
        return to_nnf(f.operand)
    if isinstance(f, And):
        return Or(_nnf_negated(f.left), _nnf_negated(f.right))
    if isinstance(f, Or):
        return And(_nnf_negated(f.left), _nnf_negated(f.right))
    if isinstance(f, Implies):
        return And(to_nnf(f.left), _nnf_negated(f.right))
    if isinstance(f, Next):
        return WeakNext(_nnf_negated(f.operand))
    if isinstance(f, WeakNext):
        return Next(_nnf_negated(f.operand))
    if isinstance(f, Until):
        return Release(_nnf_negated(f.left), _nnf_negated(f.right))
    if isinstance(f, Release):
        return Until(_nnf_negated(f.left), _nnf_negated(f.right))
    if isinstance(f, Eventually):
        return Release(FALSE, _nnf_negated(f.operand))
    if isinstance(f, Always):
        return Until(TRUE, _nnf_negated(f.operand))
    raise TypeError(f"not a formula: {f!r}")


def is_nnf(f: Formula) -> bool:
    """True when negation occurs on atoms only and F/G/-> are absent."""
    if isinstance(f, (TrueF, FalseF, Atom)):
        return True
    if isinstance(f, Not):
        return isinstance(f.operand, Atom)
    if isinstance(f, (And, Or, Until, Release)):
        return is_nnf(f.left) and is_nnf(f.right)
    if isinstance(f, (Next, WeakNext)):
        return is_nnf(f.operand)
    return False


def eval_trace(f: Formula, trace: Trace, pos: int = 0) -> bool:
    """Evaluate ``f`` on a nonempty finite trace at position ``pos``.

    Follows the finite-trace semantics clause by clause: ``Next`` demands
    a following position, ``WeakNext`` is its dual, ``Until`` needs a
    witness inside the trace and ``Release`` holds vacuously at the end.
    """
    n = len(trace)
    if n == 0:
        raise ValueError("cannot evaluate a formula on an empty trace")
    if not 0 <= pos < n:
        raise IndexError(f"position {pos} outside trace of length {n}")
    return _eval(f, trace, pos, n)


def _eval(f: Formula, t: Trace, i: int, n: int) -> bool:
    if isinstance(f, TrueF):
        return True
    if isinstance(f, FalseF):
        return False
    if isinstance(f, Atom):
        return f.name in t[i]
    if isinstance(f, Not):
        return not _eval(f.operand, t, i, n)
    if isinstance(f, And):
        return _eval(f.left, t, i, n) and _eval(f.right, t, i, n)
    if isinstance(f, Or):
        return _eval(f.left, t, i, n) or _eval(f.right, t, i, n)
    if isinstance(f, Implies):
        return (not _eval(f.left, t, i, n)) or _eval(f.right, t, i, n)
    if isinstance(f, Next):
        return i + 1 < n and _eval(f.operand, t, i + 1, n)
    if isinstance(f, WeakNext):
        return i + 1 >= n or _eval(f.operand, t, i + 1, n)
    if isinstance(f, Until):
        for j in range(i, n):
            if _eval(f.right, t, j, n):
                return all(_eval(f.left, t, k, n) for k in range(i, j))
        return False
    if isinstance(f, Release):
        for j in range(i, n):
            if not _eval(f.right, t, j, n):
                if not any(_eval(f.left, t, k, n) for k in range(i, j)):
                    return False
        return True
    if isinstance(f, Eventually):
        return any(_eval(f.operand, t, j, n) for j in range(i, n))
    if isinstance(f, Always):
        return all(_eval(f.operand, t, j, n) for j in range(i, n))
    raise TypeError(f"not a formula: {f!r}")


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Partition:
    """Ordered split of the atoms into environment inputs and system outputs.

    The order is significant: it fixes bit positions in letters, variable
    order in decision diagrams, and enumeration order during solving.
    """

    inputs: tuple[str, ...]
    outputs: tuple[str, ...]

    def __post_init__(self) -> None:
        names = self.inputs + self.outputs
        for name in names:
            if not _NAME_RE.match(name):
                raise ValueError(f"bad atom name: {name!r}")
        if len(set(names)) != len(names):
            raise ValueError("inputs and outputs must be disjoint and free of duplicates")

    @property
    def atoms(self) -> tuple[str, ...]:
        """All atoms, inputs first, in declaration order."""
        return self.inputs + self.outputs


# Operator precedence, used by both the printer here and the parser.
# Higher binds tighter.
PREC_IMPLIES = 1
PREC_OR = 2
PREC_AND = 3
PREC_UNTIL = 4
PREC_UNARY = 5
PREC_LEAF = 6

_UNARY_TOKEN = {Not: "!", Next: "X", WeakNext: "WX", Eventually: "F", Always: "G"}
_BINARY_TOKEN = {And: "&", Or: "|", Implies: "->", Until: "U", Release: "R"}


def _prec(f: Formula) -> int:
    if isinstance(f, (TrueF, FalseF, Atom)):
        return PREC_LEAF
    if isinstance(f, _UNARY):
        return PREC_UNARY
    if isinstance(f, (Until, Release)):
        return PREC_UNTIL
    if isinstance(f, And):
        return PREC_AND
    if isinstance(f, Or):
        return PREC_OR
    return PREC_IMPLIES


def format_formula(f: Formula) -> str:
    """Render ``f`` in the concrete grammar; reparsing gives back ``f``."""
    return _render(f, 0)


def _render(f: Formula, ctx: int) -> str:
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, FalseF):
        return "false"
    if isinstance(f, Atom):
        return f.name
    prec = _prec(f)
    if isinstance(f, Not):
        text = "!" + _render(f.operand, PREC_UNARY)
    elif isinstance(f, _UNARY):
        text = _UNARY_TOKEN[type(f)] + " " + _render(f.operand, PREC_UNARY)
    elif isinstance(f, (Until, Release)):
        # Right-associative.
        text = (
            _render(f.left, PREC_UNARY)
            + f" {_BINARY_TOKEN[type(f)]} "
            + _render(f.right, PREC_UNTIL)
        )
    elif isinstance(f, And):
        text = _render(f.left, PREC_AND) + " & " + _render(f.right, PREC_AND + 1)
    elif isinstance(f, Or):
        text = _render(f.left, PREC_OR) + " | " + _render(f.right, PREC_OR + 1)
    elif isinstance(f, Implies):
        text = _render(f.left, PREC_OR) + " -> " + _render(f.right, PREC_IMPLIES)
    else:
        raise TypeError(f"not a formula: {f!r}")
    if prec < ctx:
        return "(" + text + ")"
    return text


_KIND_RANK = {
    TrueF: 0,
    FalseF: 1,
    Atom: 2,
    Not: 3,
    Next: 4,
    WeakNext: 5,
    Eventually: 6,
    Always: 7,
    And: 8,
    Or: 9,
    Until: 10,
    Release: 11,
    Implies: 12,
}


def formula_key(f: Formula):
    """A total, deterministic sort key over formulas (structural)."""
    rank = _KIND_RANK[type(f)]
    if isinstance(f, Atom):
        return (rank, f.name)
    if isinstance(f, _UNARY):
        return (rank, formula_key(f.operand))
    if isinstance(f, _BINARY):
        return (rank, formula_key(f.left), formula_key(f.right))
    return (rank,)
