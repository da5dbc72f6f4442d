"""Winning strategies as transducers, and checks that they really win.

A strategy here is a Moore machine over the winning region: each state
fixes an output vector up front, the environment picks an input vector,
and the automaton step decides the next state.  The symbolic path first
extracts one output function per output atom from the fixpoint relation,
then folds those functions into the transition diagrams; the explicit
path reuses the outputs recorded while the winning set grew.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .automata import ExplicitDfa, atoms_to_letter, letter_bits
from .bdd import DdManager
from .formulas import Formula, Partition, eval_trace
from .games import ExplicitSolution, SymbolicSolution
from .symbolic import SymbolicDfa

__all__ = [
    "OutputFunction",
    "SymbolicTransducer",
    "ExplicitTransducer",
    "Run",
    "synthesize_tau",
    "build_symbolic_transducer",
    "build_explicit_transducer",
    "explicit_from_symbolic",
    "run",
    "verify_strategy",
    "check_trace",
    "transducer_to_json",
    "transducer_from_json",
    "export_transducer_dot",
]


@dataclass(frozen=True)
class OutputFunction:
    """One diagram per output atom, each over the state bits alone."""

    manager: DdManager
    names: tuple[str, ...]
    diagrams: tuple[int, ...]

    def mask_at(self, assignment: Mapping[str, bool]) -> int:
        """Output vector at a state-bit assignment, packed little-endian."""
        mask = 0
        for j, dd in enumerate(self.diagrams):
            if self.manager.evaluate(dd, assignment):
                mask |= 1 << j
        return mask


def synthesize_tau(
    sol: SymbolicSolution, sd: SymbolicDfa | None = None
) -> OutputFunction:
    """Read a concrete output function off the fixpoint relation.

    The relation ``t`` pairs winning state codes with the output vectors
    that witnessed them.  Solving it output by output yields functions
    that may still mention earlier outputs; composing those away in
    order leaves each output a function of the state bits alone.  Ties
    resolve towards false, earliest output first.
    """
    if sd is None:
        sd = sol.dfa
    elif sd is not sol.dfa:
        raise ValueError("solution was computed for a different automaton")
    m = sol.manager
    gammas = m.solve_outputs(sol.t, sd.y_names)
    taus: list[int] = []
    subst: dict[str, int] = {}
    for name, gamma in zip(sd.y_names, gammas):
        tau_j = m.compose(gamma, subst) if subst else gamma
        taus.append(tau_j)
        subst[name] = tau_j
    return OutputFunction(manager=m, names=sd.y_names, diagrams=tuple(taus))


@dataclass(frozen=True)
class SymbolicTransducer:
    """Strategy folded into the encoded automaton.

    ``tau`` reads the output atoms off the state bits; ``zeta[j]`` is
    the transition diagram for state bit j with the outputs already
    substituted, so it depends only on state bits and inputs.
    """

    dfa: SymbolicDfa
    tau: OutputFunction
    zeta: tuple[int, ...]

    def output_mask(self, code: int) -> int:
        return self.tau.mask_at(self.dfa.code_assignment(code))

    def next_code(self, code: int, x_mask: int) -> int:
        m = self.dfa.manager
        a = self.dfa.code_assignment(code)
        for i, name in enumerate(self.dfa.x_names):
            a[name] = bool(x_mask >> i & 1)
        out = 0
        for j, zeta_j in enumerate(self.zeta):
            if m.evaluate(zeta_j, a):
                out |= 1 << j
        return out


def build_symbolic_transducer(
    sd: SymbolicDfa, tau: OutputFunction
) -> SymbolicTransducer:
    """Substitute the output function into every transition diagram."""
    m = sd.manager
    subst = dict(zip(tau.names, tau.diagrams))
    zeta = tuple(m.compose(eta_j, subst) for eta_j in sd.eta)
    return SymbolicTransducer(dfa=sd, tau=tau, zeta=zeta)


@dataclass(frozen=True)
class ExplicitTransducer:
    """Moore machine over the winning states of a DFA.

    ``omega`` fixes the output vector of every state; for accepting
    states the play is already over, so their entry is an all-false
    placeholder listed in ``omega_dontcare`` and they have no ``delta``
    row — a run stops at the first accepting state it enters.
    """

    partition: Partition
    states: tuple[int, ...]
    initial: int
    accepting: frozenset[int]
    delta: dict[int, dict[int, int]] = field(compare=False)
    omega: dict[int, int] = field(compare=False)
    omega_dontcare: frozenset[int] = frozenset()


def build_explicit_transducer(
    d: ExplicitDfa, sol: ExplicitSolution
) -> ExplicitTransducer:
    """Keep the winning states and the outputs recorded when they joined."""
    if not sol.realizable:
        raise ValueError("no winning strategy exists from the initial state")
    if d.initial not in sol.winning:
        raise ValueError("initial state is outside the winning set")
    n_x = len(d.partition.inputs)
    delta: dict[int, dict[int, int]] = {}
    omega: dict[int, int] = {}
    for s in sorted(sol.winning):
        y = sol.winning_output.get(s)
        if y is None:
            # Accepting state without an obligation: the play is over
            # before its output could matter.
            omega[s] = 0
            continue
        omega[s] = y
        shifted = y << n_x
        delta[s] = {x: d.delta[s][x | shifted] for x in range(1 << n_x)}
    return ExplicitTransducer(
        partition=d.partition,
        states=tuple(sorted(sol.winning)),
        initial=d.initial,
        accepting=frozenset(d.accepting),
        delta=delta,
        omega=omega,
        omega_dontcare=frozenset(d.accepting) - sol.winning_output.keys(),
    )


def explicit_from_symbolic(st: SymbolicTransducer) -> ExplicitTransducer:
    """Enumerate the codes the folded strategy can reach from the start.

    Expansion stops at accepting codes, mirroring how runs stop, so the
    result only carries rows a run can actually use.
    """
    sd = st.dfa
    m = sd.manager
    n_x = len(sd.x_names)

    def accepting_code(code: int) -> bool:
        return m.evaluate(sd.acc, sd.code_assignment(code))

    delta: dict[int, dict[int, int]] = {}
    omega: dict[int, int] = {}
    accepting: set[int] = set()
    seen = {sd.z0_code}
    frontier = [sd.z0_code]
    while frontier:
        code = frontier.pop()
        if accepting_code(code):
            accepting.add(code)
            omega[code] = 0
            continue
        omega[code] = st.output_mask(code)
        row = {}
        for x in range(1 << n_x):
            post = st.next_code(code, x)
            row[x] = post
            if post not in seen:
                seen.add(post)
                frontier.append(post)
        delta[code] = row
    return ExplicitTransducer(
        partition=Partition(sd.x_names, sd.y_names),
        states=tuple(sorted(seen)),
        initial=sd.z0_code,
        accepting=frozenset(accepting),
        delta=delta,
        omega=omega,
        omega_dontcare=frozenset(accepting),
    )


@dataclass(frozen=True)
class Run:
    """One play: per step the input atoms, output atoms and the state after."""

    steps: tuple[tuple[frozenset[str], frozenset[str], int], ...]
    accepted_at: int | None


def _atom_set(mask: int, names: tuple[str, ...]) -> frozenset[str]:
    return frozenset(name for i, name in enumerate(names) if mask >> i & 1)


def run(
    t: ExplicitTransducer | SymbolicTransducer,
    inputs: Iterable[Iterable[str]],
) -> Run:
    """Replay input letters against a strategy; stop when a step accepts.

    Each letter is the set of input atoms that hold at that step.  The
    sequence must be nonempty — a play makes at least one move — and a
    letter naming anything but an input atom is rejected.  Letters after
    the accepting step are ignored.
    """
    if isinstance(t, SymbolicTransducer):
        x_names = t.dfa.x_names
        y_names = t.dfa.y_names
        state = t.dfa.z0_code
        accepting = None
    else:
        x_names = t.partition.inputs
        y_names = t.partition.outputs
        state = t.initial
        accepting = t.accepting
    steps: list[tuple[frozenset[str], frozenset[str], int]] = []
    for letter in inputs:
        atoms = frozenset(letter)
        extra = atoms - set(x_names)
        if extra:
            raise ValueError(f"not input atoms: {', '.join(sorted(extra))}")
        x = atoms_to_letter(atoms, x_names)
        if isinstance(t, SymbolicTransducer):
            y = t.output_mask(state)
            post = t.next_code(state, x)
            m = t.dfa.manager
            accepted = m.evaluate(t.dfa.acc, t.dfa.code_assignment(post))
        else:
            y = t.omega[state]
            post = t.delta[state][x]
            accepted = post in accepting
        steps.append((atoms, _atom_set(y, y_names), post))
        if accepted:
            return Run(steps=tuple(steps), accepted_at=len(steps) - 1)
        state = post
    if not steps:
        raise ValueError("input sequence must be nonempty")
    return Run(steps=tuple(steps), accepted_at=None)


def verify_strategy(
    d: ExplicitDfa,
    t: ExplicitTransducer | SymbolicTransducer,
    bound: int | None = None,
) -> bool:
    """Check the strategy forces the DFA into acceptance from the start.

    Transitions are taken from the automaton itself; the transducer only
    supplies each state's output vector, so a transducer whose outputs
    were tampered with fails here even if its own graph looks fine.  A
    branch that runs for ``bound`` steps without accepting revisited
    some state and can be pumped forever; the default bound of the state
    count is therefore exhaustive.  The memo exploits monotonicity in
    the remaining budget, as a forced win only gets easier with more
    steps.
    """
    if bound is None:
        bound = d.n_states
    n_x = len(d.partition.inputs)
    x_masks = range(1 << n_x)

    if isinstance(t, SymbolicTransducer):
        output_of = t.output_mask
    else:
        omega = t.omega

        def output_of(s: int) -> int:
            y = omega.get(s)
            if y is None:
                raise KeyError(s)
            return y

    true_at: dict[int, int] = {}
    false_at: dict[int, int] = {}

    def forces(s: int, budget: int) -> bool:
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
            try:
                shifted = output_of(s) << n_x
            except KeyError:
                return False
            row = d.delta[s]
            ok = all(forces(row[x | shifted], budget - 1) for x in x_masks)
        if ok:
            true_at[s] = min(true_at.get(s, budget), budget)
        else:
            false_at[s] = max(false_at.get(s, -1), budget)
        return ok

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 8 * bound + 200))
    try:
        # The first move is unconditional: a play has length at least one,
        # so acceptance of the initial state itself does not count.
        try:
            shifted = output_of(d.initial) << n_x
        except KeyError:
            return False
        row0 = d.delta[d.initial]
        return all(forces(row0[x | shifted], bound) for x in x_masks)
    finally:
        sys.setrecursionlimit(old_limit)


def check_trace(f: Formula, r: Run) -> bool:
    """Evaluate the formula on the accepted part of a run's trace.

    The run must have accepted; the trace checked is exactly the steps
    up to and including the accepting one, each letter the union of that
    step's input and output atoms.
    """
    if r.accepted_at is None:
        raise ValueError("run never reached an accepting state")
    trace = tuple(x | y for x, y, _post in r.steps[: r.accepted_at + 1])
    return eval_trace(f, trace)


def transducer_to_json(t: ExplicitTransducer) -> dict:
    n_x = len(t.partition.inputs)
    n_y = len(t.partition.outputs)
    return {
        "inputs": list(t.partition.inputs),
        "outputs": list(t.partition.outputs),
        "states": list(t.states),
        "initial": t.initial,
        "accepting": sorted(t.accepting),
        "delta": {
            str(s): {letter_bits(x, n_x): post for x, post in sorted(row.items())}
            for s, row in sorted(t.delta.items())
        },
        "omega": {
            str(s): letter_bits(y, n_y) for s, y in sorted(t.omega.items())
        },
        "omega_dontcare": sorted(t.omega_dontcare),
    }


def _mask_of(bits: str, width: int, what: str) -> int:
    if len(bits) != width or any(c not in "01" for c in bits):
        raise ValueError(f"bad {what} bit string {bits!r}: expected {width} bits")
    return sum(1 << k for k, c in enumerate(bits) if c == "1")


def transducer_from_json(data: Mapping) -> ExplicitTransducer:
    partition = Partition(tuple(data["inputs"]), tuple(data["outputs"]))
    n_x = len(partition.inputs)
    n_y = len(partition.outputs)
    delta = {
        int(s): {
            _mask_of(bits, n_x, "input"): int(post)
            for bits, post in row.items()
        }
        for s, row in data["delta"].items()
    }
    omega = {
        int(s): _mask_of(bits, n_y, "output") for s, bits in data["omega"].items()
    }
    return ExplicitTransducer(
        partition=partition,
        states=tuple(int(s) for s in data["states"]),
        initial=int(data["initial"]),
        accepting=frozenset(int(s) for s in data["accepting"]),
        delta=delta,
        omega=omega,
        omega_dontcare=frozenset(int(s) for s in data["omega_dontcare"]),
    )


def export_transducer_dot(t: ExplicitTransducer) -> str:
    """Graphviz view with edges labelled ``input-bits / output-bits``."""
    n_x = len(t.partition.inputs)
    n_y = len(t.partition.outputs)
    lines = [
        "digraph transducer {",
        "  rankdir=LR;",
        '  init [shape=point, label=""];',
        f"  init -> {t.initial};",
    ]
    for s in t.states:
        shape = "doublecircle" if s in t.accepting else "circle"
        lines.append(f"  {s} [shape={shape}];")
    for s, row in sorted(t.delta.items()):
        y_bits = letter_bits(t.omega[s], n_y)
        grouped: dict[int, list[str]] = {}
        for x, post in sorted(row.items()):
            grouped.setdefault(post, []).append(letter_bits(x, n_x))
        for post, labels in sorted(grouped.items()):
            label = "\\n".join(f"{xb} / {y_bits}" for xb in labels)
            lines.append(f'  {s} -> {post} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
