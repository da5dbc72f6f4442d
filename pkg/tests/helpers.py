"""Shared test machinery: an independent trace evaluator and corpus builders.

The evaluator here works backward over the trace, one satisfaction
table per position, following the suffix recurrences of the semantics.
The package's own evaluator recurses forward through the clauses, so
the two share no code path and disagree loudly when either is wrong.
"""

from __future__ import annotations

import random

from ltlfsynth import (
    Always,
    And,
    Atom,
    Eventually,
    FalseF,
    Formula,
    Implies,
    Next,
    Not,
    Or,
    Release,
    TrueF,
    Until,
    WeakNext,
)
from ltlfsynth.automata import letter_to_atoms


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (Not, Next, WeakNext, Eventually, Always)):
        return (f.operand,)
    if isinstance(f, (And, Or, Implies, Until, Release)):
        return (f.left, f.right)
    return ()


def subformulas(f: Formula) -> list[Formula]:
    """Postorder, children before parents, structurally deduplicated."""
    order: list[Formula] = []
    seen: set[Formula] = set()

    def walk(g: Formula) -> None:
        if g in seen:
            return
        for child in children(g):
            walk(child)
        seen.add(g)
        order.append(g)

    walk(f)
    return order


def _step_table(
    subs: list[Formula],
    slot: dict[Formula, int],
    letter: frozenset[str],
    nxt: tuple[bool, ...] | None,
) -> tuple[bool, ...]:
    """Satisfaction of every subformula on ``letter`` followed by the
    suffix whose table is ``nxt`` (``None`` meaning this is the last step)."""
    row: list[bool] = []
    for k, g in enumerate(subs):
        if isinstance(g, TrueF):
            v = True
        elif isinstance(g, FalseF):
            v = False
        elif isinstance(g, Atom):
            v = g.name in letter
        elif isinstance(g, Not):
            v = not row[slot[g.operand]]
        elif isinstance(g, And):
            v = row[slot[g.left]] and row[slot[g.right]]
        elif isinstance(g, Or):
            v = row[slot[g.left]] or row[slot[g.right]]
        elif isinstance(g, Implies):
            v = (not row[slot[g.left]]) or row[slot[g.right]]
        elif isinstance(g, Next):
            v = nxt is not None and nxt[slot[g.operand]]
        elif isinstance(g, WeakNext):
            v = nxt is None or nxt[slot[g.operand]]
        elif isinstance(g, Until):
            v = row[slot[g.right]] or (
                row[slot[g.left]] and nxt is not None and nxt[k]
            )
        elif isinstance(g, Release):
            v = row[slot[g.right]] and (
                row[slot[g.left]] or nxt is None or nxt[k]
            )
        elif isinstance(g, Eventually):
            v = row[slot[g.operand]] or (nxt is not None and nxt[k])
        elif isinstance(g, Always):
            v = row[slot[g.operand]] and (nxt is None or nxt[k])
        else:
            raise TypeError(f"not a formula: {g!r}")
        row.append(v)
    return tuple(row)


def eval_oracle(f: Formula, trace, pos: int = 0) -> bool:
    """Reference satisfaction value, computed by backward tables."""
    steps = [frozenset(s) for s in trace]
    if not steps:
        raise ValueError("empty trace")
    subs = subformulas(f)
    slot = {g: k for k, g in enumerate(subs)}
    table: tuple[bool, ...] | None = None
    tables: list[tuple[bool, ...]] = []
    for letter in reversed(steps):
        table = _step_table(subs, slot, letter, table)
        tables.append(table)
    tables.reverse()
    return tables[pos][slot[f]]


def language_mismatch(f: Formula, d, max_len: int):
    """Search every trace of length 1..max_len for a point where the
    automaton and the backward evaluator disagree.

    Traces are collapsed into classes: two suffixes behave identically
    when they induce the same satisfaction table and the same
    state-to-acceptance map, and every extension of equal classes stays
    equal.  The class graph is walked breadth-first instead of the
    exponential trace tree, so the check is exhaustive yet fast.

    Returns ``(classes, mismatch)`` where ``mismatch`` is a concrete
    counterexample trace or ``None``, and ``classes`` is the list of
    one representative trace per behavior class encountered.
    """
    names = d.partition.atoms
    subs = subformulas(f)
    slot = {g: k for k, g in enumerate(subs)}
    root = slot[f]
    letters = [letter_to_atoms(l, names) for l in range(d.n_letters)]
    n = d.n_states
    base_accept = tuple(s in d.accepting for s in range(n))

    reps: list[tuple[frozenset[str], ...]] = []
    seen: set[tuple] = set()
    frontier: list[tuple[tuple[bool, ...], tuple[bool, ...], tuple]] = []
    for li, letter in enumerate(letters):
        vec = _step_table(subs, slot, letter, None)
        acc = tuple(base_accept[d.delta[s][li]] for s in range(n))
        key = (vec, acc)
        if key in seen:
            continue
        seen.add(key)
        rep = (letter,)
        reps.append(rep)
        if vec[root] != acc[d.initial]:
            return reps, rep
        frontier.append((vec, acc, rep))

    for _ in range(max_len - 1):
        nxt_frontier = []
        for vec, acc, rep in frontier:
            for li, letter in enumerate(letters):
                vec2 = _step_table(subs, slot, letter, vec)
                acc2 = tuple(acc[d.delta[s][li]] for s in range(n))
                key = (vec2, acc2)
                if key in seen:
                    continue
                seen.add(key)
                rep2 = (letter, *rep)
                reps.append(rep2)
                if vec2[root] != acc2[d.initial]:
                    return reps, rep2
                nxt_frontier.append((vec2, acc2, rep2))
        frontier = nxt_frontier
    return reps, None


_LEAF_BIAS = 0.35
_OPS = (
    "not", "and", "or", "implies",
    "next", "weaknext", "until", "release", "eventually", "always",
)


def rand_formula(rng: random.Random, atoms, depth: int) -> Formula:
    """A random formula over ``atoms``, at most ``depth`` operators deep."""
    atoms = tuple(atoms)
    if depth == 0 or rng.random() < _LEAF_BIAS:
        roll = rng.random()
        if roll < 0.06:
            return TrueF()
        if roll < 0.12:
            return FalseF()
        return Atom(rng.choice(atoms))
    op = rng.choice(_OPS)
    a = rand_formula(rng, atoms, depth - 1)
    if op == "not":
        return Not(a)
    if op == "next":
        return Next(a)
    if op == "weaknext":
        return WeakNext(a)
    if op == "eventually":
        return Eventually(a)
    if op == "always":
        return Always(a)
    b = rand_formula(rng, atoms, depth - 1)
    return {"and": And, "or": Or, "implies": Implies,
            "until": Until, "release": Release}[op](a, b)


def all_traces(atom_names, length: int):
    """Every trace of exactly ``length`` steps over the given atoms."""
    atom_names = tuple(atom_names)
    n = len(atom_names)
    letters = [
        frozenset(a for k, a in enumerate(atom_names) if mask >> k & 1)
        for mask in range(1 << n)
    ]
    def rec(k):
        if k == 0:
            yield ()
            return
        for tail in rec(k - 1):
            for letter in letters:
                yield (letter, *tail)
    return rec(length)
