"""Embedding finite-trace formulas into standard infinite-trace LTL.

A fresh output atom marks the positions that belong to the intended
finite trace: it holds on every in-trace position and never again after
the trace ends.  The embedding keeps temporal obligations from leaking
into the padding — existential steps must land on a marked position,
universal ones only constrain marked positions:

    embed(f)  =  Tail  and  (Tail U G !Tail)  and  tr(f)

    tr(X g)      = X (Tail and tr(g))        tr(WX g)    = X (Tail -> tr(g))
    tr(g U h)    = tr(g) U (Tail and tr(h))  tr(g R h)   = tr(g) R (Tail -> tr(h))
    tr(F g)      = F (Tail and tr(g))        tr(G g)     = G (Tail -> tr(g))

with tr homomorphic elsewhere.  Infinite-trace models are evaluated on
lassos (a finite prefix plus a repeating loop).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import reduce
from typing import Iterable

from .formulas import (
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
    Partition,
    Release,
    Trace,
    TrueF,
    Until,
    WeakNext,
    atoms_of,
    eval_trace,
)

__all__ = [
    "TAIL",
    "LtlProblem",
    "Lasso",
    "reduce_to_ltl",
    "eval_lasso",
    "tail_extension",
    "validate_reduction",
]

TAIL = "Tail"


@dataclass(frozen=True)
class LtlProblem:
    """An infinite-trace formula with its input/output split.

    The outputs include the end-of-trace marker, which the embedded
    system controls like any other output.
    """

    formula: Formula
    partition: Partition

    @property
    def inputs(self) -> tuple[str, ...]:
        return self.partition.inputs

    @property
    def outputs(self) -> tuple[str, ...]:
        return self.partition.outputs


def _tr(f: Formula, tail: Formula) -> Formula:
    if isinstance(f, (TrueF, FalseF, Atom)):
        return f
    if isinstance(f, Not):
        return Not(_tr(f.operand, tail))
    if isinstance(f, And):
        return And(_tr(f.left, tail), _tr(f.right, tail))
    if isinstance(f, Or):
        return Or(_tr(f.left, tail), _tr(f.right, tail))
    if isinstance(f, Implies):
        return Implies(_tr(f.left, tail), _tr(f.right, tail))
    if isinstance(f, Next):
        return Next(And(tail, _tr(f.operand, tail)))
    if isinstance(f, WeakNext):
        return Next(Implies(tail, _tr(f.operand, tail)))
    if isinstance(f, Until):
        return Until(_tr(f.left, tail), And(tail, _tr(f.right, tail)))
    if isinstance(f, Release):
        return Release(_tr(f.left, tail), Implies(tail, _tr(f.right, tail)))
    if isinstance(f, Eventually):
        return Eventually(And(tail, _tr(f.operand, tail)))
    if isinstance(f, Always):
        return Always(Implies(tail, _tr(f.operand, tail)))
    raise TypeError(f"unknown formula node {f!r}")


def reduce_to_ltl(f: Formula, partition: Partition) -> LtlProblem:
    """Rewrite a finite-trace formula over an infinite-trace marker atom.

    The marker is an extra output: the system controls when the trace
    ends.  Returns the embedded formula together with the partition, the
    marker appended to the outputs.
    """
    if TAIL in partition.atoms or TAIL in atoms_of(f):
        raise ValueError(
            f"atom name {TAIL!r} is reserved for the end-of-trace marker"
        )
    tail = Atom(TAIL)
    conjuncts = [tail, Until(tail, Always(Not(tail)))]
    core = _tr(f, tail)
    if not isinstance(core, TrueF):
        conjuncts.append(core)
    embedded = reduce(And, conjuncts)
    extended = Partition(partition.inputs, partition.outputs + (TAIL,))
    return LtlProblem(formula=embedded, partition=extended)


@dataclass(frozen=True)
class Lasso:
    """Ultimately periodic word: ``prefix`` then ``loop`` forever."""

    prefix: Trace
    loop: Trace

    def __post_init__(self) -> None:
        if not self.loop:
            raise ValueError("lasso loop must be non-empty")

    def at(self, i: int) -> frozenset[str]:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.loop[(i - len(self.prefix)) % len(self.loop)]


def eval_lasso(f: Formula, w: Lasso, i: int = 0) -> bool:
    """Truth of an LTL formula at position ``i`` of an ultimately periodic word.

    The position must fall inside the word's fundamental range — the
    prefix plus one turn of the loop; later positions repeat earlier
    ones.  Values are computed on two unrollings of the loop, with the
    successor of the last position wrapping to the loop start.  Until
    and Eventually start from false and grow, Release and Always start
    from true and shrink; backward sweeps repeat until nothing changes,
    which computes the least respectively greatest fixpoint on the
    finite wrap-around graph.
    """
    p, loop = len(w.prefix), len(w.loop)
    if not 0 <= i < p + loop:
        raise ValueError(
            f"position {i} outside the prefix plus one loop ({p + loop} steps)"
        )
    pos = i
    positions = list(w.prefix) + list(w.loop) * 2
    n = len(positions)
    succ = [i + 1 for i in range(n)]
    succ[n - 1] = p

    order: list[Formula] = []
    seen: set[int] = set()

    def visit(g: Formula) -> None:
        if id(g) in seen:
            return
        seen.add(id(g))
        for child in _children(g):
            visit(child)
        order.append(g)

    visit(f)
    vals: dict[int, list[bool]] = {}

    def v(g: Formula) -> list[bool]:
        return vals[id(g)]

    for g in order:
        if isinstance(g, TrueF):
            row = [True] * n
        elif isinstance(g, FalseF):
            row = [False] * n
        elif isinstance(g, Atom):
            row = [g.name in positions[i] for i in range(n)]
        elif isinstance(g, Not):
            row = [not b for b in v(g.operand)]
        elif isinstance(g, And):
            row = [a and b for a, b in zip(v(g.left), v(g.right))]
        elif isinstance(g, Or):
            row = [a or b for a, b in zip(v(g.left), v(g.right))]
        elif isinstance(g, Implies):
            row = [(not a) or b for a, b in zip(v(g.left), v(g.right))]
        elif isinstance(g, (Next, WeakNext)):
            child = v(g.operand)
            row = [child[succ[i]] for i in range(n)]
        elif isinstance(g, (Until, Eventually)):
            hold = v(g.left) if isinstance(g, Until) else [True] * n
            target = v(g.right) if isinstance(g, Until) else v(g.operand)
            row = [False] * n
            changed = True
            while changed:
                changed = False
                for i in range(n - 1, -1, -1):
                    new = target[i] or (hold[i] and row[succ[i]])
                    if new != row[i]:
                        row[i] = new
                        changed = True
        elif isinstance(g, (Release, Always)):
            release = v(g.left) if isinstance(g, Release) else [False] * n
            body = v(g.right) if isinstance(g, Release) else v(g.operand)
            row = [True] * n
            changed = True
            while changed:
                changed = False
                for i in range(n - 1, -1, -1):
                    new = body[i] and (release[i] or row[succ[i]])
                    if new != row[i]:
                        row[i] = new
                        changed = True
        else:
            raise TypeError(f"unknown formula node {g!r}")
        vals[id(g)] = row
    return v(f)[pos]


def _children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (Not, Next, WeakNext, Eventually, Always)):
        return (f.operand,)
    if isinstance(f, (And, Or, Implies, Until, Release)):
        return (f.left, f.right)
    return ()


def tail_extension(
    trace: Iterable[Iterable[str]],
    padding: Iterable[Iterable[str]] = (),
    loop: Iterable[Iterable[str]] = ((),),
) -> Lasso:
    """Mark a finite trace and pad it into a lasso.

    Every trace position gets the marker atom added; padding and loop
    positions keep it absent.  The default padding is empty and the
    default loop is a single blank position.
    """
    prefix = [frozenset(step) | {TAIL} for step in trace]
    prefix += [frozenset(step) - {TAIL} for step in padding]
    loop_steps = tuple(frozenset(step) - {TAIL} for step in loop)
    return Lasso(prefix=tuple(prefix), loop=loop_steps)


def validate_reduction(
    f: Formula,
    partition: Partition,
    *,
    samples: int = 200,
    rng: random.Random | None = None,
) -> bool:
    """Spot-check the embedding against direct finite-trace evaluation.

    Random finite traces are compared with random lasso extensions of
    themselves: the embedded formula must hold on the lasso exactly when
    the original holds on the trace, whatever junk fills the padding.
    """
    rng = rng or random.Random(0)
    problem = reduce_to_ltl(f, partition)
    names = partition.atoms

    def step() -> frozenset[str]:
        return frozenset(a for a in names if rng.random() < 0.5)

    for _ in range(samples):
        trace = tuple(step() for _ in range(rng.randint(1, 5)))
        padding = [step() for _ in range(rng.randint(0, 2))]
        lasso_loop = [step() for _ in range(rng.randint(1, 3))]
        w = tail_extension(trace, padding, lasso_loop)
        if eval_trace(f, trace) != eval_lasso(problem.formula, w):
            return False
    return True
