"""Symbolic view of an explicit DFA over boolean state bits.

States are numbered breadth-first from the initial state, and the number
itself is the state's code over ``n = max(1, ceil(log2 |S|))`` fresh bits
(bit j of code i is ``i >> j & 1``).  The transition function becomes one
diagram per bit over state bits, inputs and outputs; acceptance becomes a
diagram over state bits.  Codes that correspond to no state map to
themselves and are never accepting, so they are unreachable from real
states.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .automata import ExplicitDfa
from .bdd import DEFAULT_NODE_CAP, DdManager

__all__ = ["SymbolicDfa", "encode", "decode"]


@dataclass(frozen=True)
class SymbolicDfa:
    """Boolean-encoded DFA; all handles live in ``manager``.

    Variable order is state bits, then inputs, then outputs, in partition
    order.  ``eta[j]`` gives the next value of state bit j as a function
    of the current state bits and the letter; ``acc`` reads only state
    bits.  ``z0`` is the code of the initial state (always code 0 after
    BFS numbering, kept explicit anyway).
    """

    manager: DdManager
    z_names: tuple[str, ...]
    x_names: tuple[str, ...]
    y_names: tuple[str, ...]
    eta: tuple[int, ...]
    acc: int
    z0_code: int
    n_states: int
    state_codes: tuple[int, ...]

    @property
    def n_bits(self) -> int:
        return len(self.z_names)

    def z0_assignment(self) -> dict[str, bool]:
        return self.code_assignment(self.z0_code)

    def code_assignment(self, code: int) -> dict[str, bool]:
        return {name: bool(code >> j & 1) for j, name in enumerate(self.z_names)}


def _fresh_bit_names(count: int, taken: set[str]) -> tuple[str, ...]:
    prefix = "z"
    while any(f"{prefix}{j}" in taken for j in range(count)):
        prefix += "_"
    return tuple(f"{prefix}{j}" for j in range(count))


def encode(d: ExplicitDfa, node_cap: int = DEFAULT_NODE_CAP) -> SymbolicDfa:
    """Encode an explicit DFA into per-bit transition diagrams."""
    n_states = d.n_states
    n_bits = max(1, (n_states - 1).bit_length()) if n_states > 1 else 1
    x_names = d.partition.inputs
    y_names = d.partition.outputs
    z_names = _fresh_bit_names(n_bits, set(x_names) | set(y_names))
    m = DdManager(z_names + x_names + y_names, node_cap=node_cap)

    letter_names = x_names + y_names
    z_vars = [m.var(name) for name in z_names]

    def state_minterm(code: int) -> int:
        out = 1
        for j, v in enumerate(z_vars):
            out = m.conj(out, v if code >> j & 1 else m.neg(v))
        return out

    def letters_diagram(letters: set[int], k: int = 0) -> int:
        # Recursive split over letter bits; sets shrink as bits are fixed.
        width = len(letter_names) - k
        if not letters:
            return 0
        if len(letters) == 1 << width:
            return 1
        v = m.var(letter_names[k])
        low = {l >> 1 for l in letters if not l & 1}
        high = {l >> 1 for l in letters if l & 1}
        return m.ite(v, letters_diagram(high, k + 1), letters_diagram(low, k + 1))

    bits = [0] * n_bits
    for s in range(n_states):
        by_target: dict[int, set[int]] = {}
        for a, t in enumerate(d.delta[s]):
            by_target.setdefault(t, set()).add(a)
        mint = state_minterm(s)
        for t, letters in by_target.items():
            if t == 0:
                continue  # all bits of code 0 are clear
            letters_f = letters_diagram(letters)
            term = m.conj(mint, letters_f)
            for j in range(n_bits):
                if t >> j & 1:
                    bits[j] = m.disj(bits[j], term)
    # Unused codes self-loop, independent of the letter.
    for code in range(n_states, 1 << n_bits):
        mint = state_minterm(code)
        for j in range(n_bits):
            if code >> j & 1:
                bits[j] = m.disj(bits[j], mint)

    acc = m.disj_all(state_minterm(s) for s in sorted(d.accepting))
    return SymbolicDfa(
        manager=m,
        z_names=z_names,
        x_names=x_names,
        y_names=y_names,
        eta=tuple(bits),
        acc=acc,
        z0_code=d.initial,
        n_states=n_states,
        state_codes=tuple(range(n_states)),
    )


def decode(sd: SymbolicDfa, z_assignment: Mapping[str, bool] | int) -> int | None:
    """State index of a bit assignment (or raw code); None if unused."""
    if isinstance(z_assignment, int):
        code = z_assignment
    else:
        code = 0
        for j, name in enumerate(sd.z_names):
            if z_assignment[name]:
                code |= 1 << j
    return code if 0 <= code < sd.n_states else None
