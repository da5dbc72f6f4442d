"""Reachability games on DFAs: which states can force acceptance.

Per step the system commits an output vector, the environment answers
with an input vector, and the automaton moves.  The system wins a play
as soon as the automaton passes through an accepting state; plays have
length at least one, so starting on an accepting state is not by itself
a win.  Three independent engines answer the same question: an explicit
frame iteration over states, a symbolic fixpoint over encoded state
bits, and a plain bounded AND-OR search kept around as a cross-check.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass

from .automata import MAX_ATOMS, ExplicitDfa
from .bdd import DdManager
from .symbolic import SymbolicDfa

__all__ = [
    "ExplicitSolution",
    "SymbolicSolution",
    "solve_explicit",
    "solve_symbolic",
    "oracle_search",
]


def _y_lex_masks(n_y: int) -> list[int]:
    """Output masks ordered lexicographically over the output vector.

    The first output atom is the most significant digit and false sorts
    before true, so the all-false vector comes first.
    """
    return [
        sum(b << j for j, b in enumerate(bits))
        for bits in itertools.product((0, 1), repeat=n_y)
    ]


def _check_width(d: ExplicitDfa) -> None:
    if d.width > MAX_ATOMS:
        raise ValueError(
            f"{d.width} atoms exceed the explicit game limit of {MAX_ATOMS}"
        )


@dataclass(frozen=True)
class ExplicitSolution:
    """Result of the frame iteration.

    ``winning_output`` maps each non-accepting winning state to an
    output that forces a move into the winning set; accepting states
    need no output.  ``rounds`` counts passes over the state set,
    including the final pass that found nothing new.
    """

    winning: frozenset[int]
    winning_output: dict[int, int]
    realizable: bool
    rounds: int


def solve_explicit(d: ExplicitDfa) -> ExplicitSolution:
    """Grow the winning set in rounds against a fixed snapshot.

    Each round tests every state outside the previous round's winning
    set: it joins if some output vector sends it into the snapshot no
    matter which input vector the environment picks.  The recorded
    output is the lexicographically first one that worked.

    Realizability is decided by a fresh one-step scan from the initial
    state against the final winning set — a play must make at least one
    move, so winning states alone do not settle the start.  The output
    the scan finds becomes the initial state's own only when the
    expansion recorded none (an accepting initial state, which still
    owes a first move).  A recorded join-time output is never replaced:
    it moves strictly closer to acceptance, while a scan output merely
    stays inside the winning set and could idle there forever.
    """
    _check_width(d)
    n_x = len(d.partition.inputs)
    x_masks = range(1 << n_x)
    y_lex = _y_lex_masks(len(d.partition.outputs))
    winning = set(d.accepting)
    winning_output: dict[int, int] = {}
    rounds = 0
    changed = True
    while changed:
        changed = False
        rounds += 1
        snapshot = frozenset(winning)
        for s in range(d.n_states):
            if s in snapshot:
                continue
            row = d.delta[s]
            for y in y_lex:
                shifted = y << n_x
                if all(row[x | shifted] in snapshot for x in x_masks):
                    winning.add(s)
                    winning_output[s] = y
                    changed = True
                    break
    row0 = d.delta[d.initial]
    entry_y = next(
        (
            y
            for y in y_lex
            if all(row0[x | (y << n_x)] in winning for x in x_masks)
        ),
        None,
    )
    if entry_y is not None and d.initial not in winning_output:
        winning_output[d.initial] = entry_y
    return ExplicitSolution(
        winning=frozenset(winning),
        winning_output=winning_output,
        realizable=entry_y is not None,
        rounds=rounds,
    )


@dataclass(frozen=True)
class SymbolicSolution:
    """Result of the symbolic fixpoint; all handles live in the manager.

    ``t`` relates winning state codes to the outputs that witnessed
    them; ``w`` is its output projection.  The histories record every
    iterate starting from the acceptance function and are index-aligned.
    ``realizable`` comes from a one-step scan off the initial code;
    ``initially_winning`` reads ``w`` at the initial code directly.  The
    two agree whenever the initial state is non-accepting, which the
    automaton construction guarantees.
    """

    dfa: SymbolicDfa
    w: int
    t: int
    w_history: tuple[int, ...]
    t_history: tuple[int, ...]
    iterations: int
    realizable: bool
    initially_winning: bool

    @property
    def manager(self) -> DdManager:
        return self.dfa.manager


def solve_symbolic(sd: SymbolicDfa) -> SymbolicSolution:
    """Least fixpoint over state codes.

    Starting from the acceptance function, each step adds the pairs
    (code, output) whose code is not yet winning but whose successor is
    winning for every input:

        t' = t  or  (not w  and  forall X. w[state bits := eta])
        w' = exists Y. t'

    The loop stops when ``w`` is unchanged (by handle equality, which is
    function equality).  Every productive step adds at least one state
    code to ``w`` and unused codes self-loop outside the acceptance set,
    so more than ``n_states + 1`` steps means the encoding is broken.
    """
    m = sd.manager
    subst = {name: sd.eta[j] for j, name in enumerate(sd.z_names)}
    t = sd.acc
    w = m.exists(sd.y_names, t)
    t_history = [t]
    w_history = [w]
    for _ in range(sd.n_states + 2):
        pre = m.forall(sd.x_names, m.compose(w, subst))
        frontier = m.conj(m.neg(w), pre)
        if frontier == 0:
            # Nothing new for t, hence nothing new for w: the fixpoint.
            break
        t = m.disj(t, frontier)
        # Every frontier pair carries a state outside w, so w grows.
        w = m.exists(sd.y_names, t)
        t_history.append(t)
        w_history.append(w)
    else:
        raise RuntimeError(
            "winning-set iteration did not converge within the state count"
        )
    step = m.exists(sd.y_names, m.forall(sd.x_names, m.compose(w, subst)))
    z0 = sd.z0_assignment()
    return SymbolicSolution(
        dfa=sd,
        w=w,
        t=t,
        w_history=tuple(w_history),
        t_history=tuple(t_history),
        iterations=len(w_history) - 1,
        realizable=m.evaluate(step, z0),
        initially_winning=m.evaluate(w, z0),
    )


def oracle_search(d: ExplicitDfa, depth: int | None = None) -> bool:
    """Realizability by plain AND-OR search, independent of both solvers.

    A state wins within a budget if it is accepting, or some output
    works against every input with one budget step fewer.  The root does
    one forced round even when the initial state is accepting, matching
    the length-one minimum on plays.  A budget of ``n_states`` is
    exhaustive — forcing a win never needs to revisit a state — so
    smaller depths are rejected.  The memo exploits monotonicity in the
    budget: a win at some budget holds at any larger one, a loss at any
    smaller one.
    """
    _check_width(d)
    if depth is None:
        depth = d.n_states
    elif depth < d.n_states:
        raise ValueError(
            f"search depth {depth} below the state count {d.n_states} "
            "cannot be exhaustive"
        )
    n_x = len(d.partition.inputs)
    x_masks = range(1 << n_x)
    y_masks = range(1 << len(d.partition.outputs))
    true_at: dict[int, int] = {}
    false_at: dict[int, int] = {}

    def win(s: int, budget: int) -> bool:
        if s in d.accepting:
            return True
        known = true_at.get(s)
        if known is not None and budget >= known:
            return True
        known = false_at.get(s)
        if known is not None and budget <= known:
            return False
        if budget == 0:
            ok = False
        else:
            row = d.delta[s]
            ok = any(
                all(win(row[x | (y << n_x)], budget - 1) for x in x_masks)
                for y in y_masks
            )
        if ok:
            true_at[s] = min(true_at.get(s, budget), budget)
        else:
            false_at[s] = max(false_at.get(s, -1), budget)
        return ok

    # Each search level spends a handful of frames (any/all generators),
    # so deep budgets need headroom beyond the default recursion limit.
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 8 * depth + 200))
    try:
        row0 = d.delta[d.initial]
        return any(
            all(win(row0[x | (y << n_x)], depth) for x in x_masks)
            for y in y_masks
        )
    finally:
        sys.setrecursionlimit(old_limit)
