"""Explicit DFA construction from temporal formulas by formula progression.

A state is the residual obligation left after consuming a prefix of the
trace.  Progressing a formula through one letter yields the residual for
the remaining suffix; a residual accepts at end of trace when its
end-of-trace evaluation (``emp``) is true.  Residuals are kept in a
canonical boolean form so that equal obligations collapse to one state.

Two marker residuals do the bookkeeping for the next-step operators:
``true U true`` holds exactly on nonempty suffixes and ``false R false``
exactly on the empty one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import AbstractSet, Iterable

from .formulas import (
    FALSE,
    TRUE,
    And,
    Atom,
    FalseF,
    Formula,
    Next,
    Not,
    Or,
    Partition,
    Release,
    TrueF,
    Until,
    WeakNext,
    atoms_of,
    formula_key,
    to_nnf,
)

__all__ = [
    "ExplicitDfa",
    "StateLimitError",
    "MAX_ATOMS",
    "DEFAULT_STATE_CAP",
    "SUFFIX_NONEMPTY",
    "SUFFIX_EMPTY",
    "progress",
    "emp",
    "canonicalize",
    "build_dfa",
    "minimize",
    "export_dot",
    "export_table",
    "atoms_to_letter",
    "letter_to_atoms",
    "letter_bits",
]

#: Residual marker: the remaining suffix is nonempty.
SUFFIX_NONEMPTY = Until(TRUE, TRUE)
#: Residual marker: the remaining suffix is empty.
SUFFIX_EMPTY = Release(FALSE, FALSE)

#: Explicit construction keeps a total transition table of 2**atoms letters.
MAX_ATOMS = 16
DEFAULT_STATE_CAP = 10**6


class StateLimitError(RuntimeError):
    """Raised when construction exceeds the configured state cap."""


@dataclass(frozen=True)
class ExplicitDfa:
    """A complete deterministic automaton over letters of the partition.

    Letters are integers: bit ``k`` set means atom ``k`` of
    ``partition.atoms`` is true.  ``delta[s][letter]`` is total.  States
    carry their defining residual formula for diagnostics only.
    """

    states: tuple[Formula, ...]
    initial: int
    delta: tuple[tuple[int, ...], ...]
    accepting: frozenset[int]
    partition: Partition

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def width(self) -> int:
        return len(self.partition.atoms)

    @property
    def n_letters(self) -> int:
        return 1 << self.width

    def accepts(self, trace: Iterable[AbstractSet[str]]) -> bool:
        """Run the automaton; empty traces are never accepted."""
        names = self.partition.atoms
        state = self.initial
        steps = 0
        for step in trace:
            state = self.delta[state][atoms_to_letter(step, names)]
            steps += 1
        return steps > 0 and state in self.accepting


def atoms_to_letter(step: AbstractSet[str], names: tuple[str, ...]) -> int:
    letter = 0
    for k, name in enumerate(names):
        if name in step:
            letter |= 1 << k
    return letter


def letter_to_atoms(letter: int, names: tuple[str, ...]) -> frozenset[str]:
    return frozenset(name for k, name in enumerate(names) if letter >> k & 1)


def letter_bits(letter: int, width: int) -> str:
    """Render a letter as a bit string, atom 0 leftmost."""
    return "".join("1" if letter >> k & 1 else "0" for k in range(width))


# The boolean layer of a residual is a set of clauses: a clause is a
# frozenset of leaves (anything that is not and/or/true/false) read
# conjunctively, and the set is read disjunctively, with TRUE = {{}} and
# FALSE = {}.  Keeping only the subset-minimal clauses and closing small
# sets under consensus makes the form canonical enough that progression
# residuals saturate: clause antichains over the finite leaf universe of a
# formula are finite, so state sets stay finite too.  Pairwise absorption
# on nested and/or trees is not enough — progressing nested untils grows
# shapes like q | (p & (q | (p & ...))) forever.

_CONSENSUS_LIMIT = 32


def _clause_ok(clause: frozenset) -> bool:
    """False when the clause contains complementary leaves."""
    return not any(
        isinstance(leaf, Not) and leaf.operand in clause for leaf in clause
    )


def _prune(clauses) -> set:
    """Keep the subset-minimal clauses (absorption)."""
    out: set = set()
    for c in sorted(clauses, key=len):
        if not any(k <= c for k in out):
            out.add(c)
    return out


def _and_sets(left, right) -> set:
    out = set()
    for c1 in left:
        for c2 in right:
            c = c1 | c2
            if _clause_ok(c):
                out.add(c)
    return _prune(out)


def _clauses_of(f: Formula) -> set:
    if isinstance(f, TrueF):
        return {frozenset()}
    if isinstance(f, FalseF):
        return set()
    if isinstance(f, Or):
        return _clauses_of(f.left) | _clauses_of(f.right)
    if isinstance(f, And):
        return _and_sets(_clauses_of(f.left), _clauses_of(f.right))
    return {frozenset((f,))}


def _saturate(clauses) -> set:
    """Close a small clause set under consensus (prime implicants).

    Without this, complementary branches such as (a & g) | (!a & g) keep
    two syntactically distinct forms of one obligation.  Sets past the
    limit stay absorption-minimal only, which can cost duplicate DFA
    states (merged again by minimize) but never wrongness.
    """
    work = _prune(clauses)
    while len(work) <= _CONSENSUS_LIMIT:
        items = sorted(work, key=len)
        new = set()
        for i, c1 in enumerate(items):
            for c2 in items[i + 1 :]:
                for leaf in c1:
                    comp = leaf.operand if isinstance(leaf, Not) else Not(leaf)
                    if comp in c2:
                        r = (c1 - {leaf}) | (c2 - {comp})
                        if _clause_ok(r) and not any(k <= r for k in work):
                            new.add(r)
        if not new:
            break
        work = _prune(work | new)
    return work


def _rebuild(clauses) -> Formula:
    if not clauses:
        return FALSE
    if frozenset() in clauses:
        return TRUE
    terms = []
    for clause in clauses:
        ordered = sorted(clause, key=formula_key)
        term = ordered[-1]
        for item in reversed(ordered[:-1]):
            term = And(item, term)
        terms.append(term)
    terms.sort(key=formula_key)
    out = terms[-1]
    for item in reversed(terms[:-1]):
        out = Or(item, out)
    return out


def _conj(parts: Iterable[Formula]) -> Formula:
    acc = {frozenset()}
    for p in parts:
        acc = _and_sets(acc, _clauses_of(p))
        if not acc:
            return FALSE
    return _rebuild(_saturate(acc))


def _disj(parts: Iterable[Formula]) -> Formula:
    acc: set = set()
    for p in parts:
        acc |= _clauses_of(p)
    return _rebuild(_saturate(acc))


def canonicalize(f: Formula) -> Formula:
    """Rebuild an NNF formula with its and/or layer in canonical form.

    The propositional structure becomes a minimal disjunction of
    conjunctions of leaves: constants folded, duplicate and subsumed
    conjunctions dropped, complementary leaves cancelled, small clause
    sets closed under consensus.  Temporal leaves are kept intact —
    their end-of-trace behaviour differs from their nonempty-suffix
    behaviour — but their operands are normalised the same way.
    """
    if isinstance(f, And):
        return _conj([canonicalize(f.left), canonicalize(f.right)])
    if isinstance(f, Or):
        return _disj([canonicalize(f.left), canonicalize(f.right)])
    if isinstance(f, Next):
        return Next(canonicalize(f.operand))
    if isinstance(f, WeakNext):
        return WeakNext(canonicalize(f.operand))
    if isinstance(f, Until):
        return Until(canonicalize(f.left), canonicalize(f.right))
    if isinstance(f, Release):
        return Release(canonicalize(f.left), canonicalize(f.right))
    return f


def _not_nnf(f: Formula) -> TypeError:
    return TypeError(f"formula is not in negation normal form: {f}")


def progress(f: Formula, letter: AbstractSet[str]) -> Formula:
    """Residual of NNF formula ``f`` after reading ``letter``.

    Satisfies: for a trace ``t`` starting with ``letter``,
    ``eval_trace(f, t, 0)`` equals ``emp(progress(f, t[0]))`` when
    ``len(t) == 1`` and ``eval_trace(progress(f, t[0]), t[1:], 0)``
    otherwise.
    """
    if isinstance(f, (TrueF, FalseF)):
        return f
    if isinstance(f, Atom):
        return TRUE if f.name in letter else FALSE
    if isinstance(f, Not):
        if isinstance(f.operand, Atom):
            return FALSE if f.operand.name in letter else TRUE
        raise _not_nnf(f)
    if isinstance(f, And):
        return _conj([progress(f.left, letter), progress(f.right, letter)])
    if isinstance(f, Or):
        return _disj([progress(f.left, letter), progress(f.right, letter)])
    if isinstance(f, Next):
        return _conj([f.operand, SUFFIX_NONEMPTY])
    if isinstance(f, WeakNext):
        return _disj([f.operand, SUFFIX_EMPTY])
    if isinstance(f, Until):
        return _disj([progress(f.right, letter), _conj([progress(f.left, letter), f])])
    if isinstance(f, Release):
        return _conj([progress(f.right, letter), _disj([progress(f.left, letter), f])])
    raise _not_nnf(f)


def emp(f: Formula) -> bool:
    """End-of-trace value of a residual: is the obligation discharged?

    Literals demand a position, so both polarities of next and until fail
    while weak next and release hold vacuously.
    """
    if isinstance(f, TrueF):
        return True
    if isinstance(f, FalseF):
        return False
    if isinstance(f, Atom):
        return False
    if isinstance(f, Not):
        if isinstance(f.operand, Atom):
            return True
        raise _not_nnf(f)
    if isinstance(f, And):
        return emp(f.left) and emp(f.right)
    if isinstance(f, Or):
        return emp(f.left) or emp(f.right)
    if isinstance(f, Next):
        return False
    if isinstance(f, WeakNext):
        return True
    if isinstance(f, Until):
        return False
    if isinstance(f, Release):
        return True
    raise _not_nnf(f)


def build_dfa(
    formula: Formula,
    partition: Partition,
    state_cap: int = DEFAULT_STATE_CAP,
) -> ExplicitDfa:
    """Construct the complete DFA of ``formula`` over ``partition``'s atoms.

    The automaton accepts exactly the nonempty traces satisfying the
    formula.  The empty word is never accepted: when the end-of-trace
    value of the initial residual is true, the entry state is a
    non-accepting copy (interior revisits keep their accepting flag), so
    game plays of length zero are never counted as wins.
    """
    names = partition.atoms
    missing = atoms_of(formula) - set(names)
    if missing:
        raise ValueError(f"atoms not covered by the partition: {sorted(missing)}")
    width = len(names)
    if width > MAX_ATOMS:
        raise ValueError(f"{width} atoms exceed the explicit limit of {MAX_ATOMS}")
    root = canonicalize(to_nnf(formula))
    n_letters = 1 << width

    index: dict[Formula, int] = {root: 0}
    states: list[Formula] = [root]
    rows: list[list[int]] = []
    memo: dict[tuple[int, frozenset[str]], Formula] = {}

    i = 0
    while i < len(states):
        s = states[i]
        present = sorted(k for k, name in enumerate(names) if name in atoms_of(s))
        targets = []
        for pm in range(1 << len(present)):
            letter_atoms = frozenset(names[present[b]] for b in range(len(present)) if pm >> b & 1)
            key = (id(s), letter_atoms)
            g = memo.get(key)
            if g is None:
                g = progress(s, letter_atoms)
                memo[key] = g
            t = index.get(g)
            if t is None:
                t = len(states)
                if t >= state_cap:
                    raise StateLimitError(f"more than {state_cap} states")
                index[g] = t
                states.append(g)
            targets.append(t)
        if present:
            row = [0] * n_letters
            for letter in range(n_letters):
                pm = 0
                for b, k in enumerate(present):
                    pm |= (letter >> k & 1) << b
                row[letter] = targets[pm]
        else:
            row = [targets[0]] * n_letters
        rows.append(row)
        i += 1

    accepting = {j for j, s in enumerate(states) if emp(s)}
    initial = 0
    if emp(root):
        if any(0 in row for row in rows):
            # Re-enterable: split off a fresh non-accepting entry copy.
            initial = len(states)
            states.append(root)
            rows.append(list(rows[0]))
        else:
            accepting.discard(0)

    d = ExplicitDfa(
        states=tuple(states),
        initial=initial,
        delta=tuple(tuple(row) for row in rows),
        accepting=frozenset(accepting),
        partition=partition,
    )
    return _bfs_renumber(d)


def _bfs_renumber(d: ExplicitDfa) -> ExplicitDfa:
    """Renumber reachable states in breadth-first order from the initial."""
    order: list[int] = [d.initial]
    seen = {d.initial: 0}
    head = 0
    while head < len(order):
        s = order[head]
        head += 1
        for t in d.delta[s]:
            if t not in seen:
                seen[t] = len(order)
                order.append(t)
    states = tuple(d.states[s] for s in order)
    delta = tuple(tuple(seen[t] for t in d.delta[s]) for s in order)
    accepting = frozenset(seen[s] for s in d.accepting if s in seen)
    return ExplicitDfa(states, 0, delta, accepting, d.partition)


def minimize(d: ExplicitDfa) -> ExplicitDfa:
    """Language-preserving minimization (Hopcroft), then BFS renumbering.

    Unreachable states are dropped; the result is deterministic for a
    given input automaton.
    """
    d = _bfs_renumber(d)
    n = d.n_states
    n_letters = d.n_letters

    preds: list[list[list[int]]] = [[[] for _ in range(n)] for _ in range(n_letters)]
    for s in range(n):
        row = d.delta[s]
        for a in range(n_letters):
            preds[a][row[a]].append(s)

    acc = set(d.accepting)
    rej = set(range(n)) - acc
    blocks: list[set[int]] = []
    block_of = [0] * n
    for group in (acc, rej):
        if group:
            for s in group:
                block_of[s] = len(blocks)
            blocks.append(set(group))
    worklist = {(b, a) for b in range(len(blocks)) for a in range(n_letters)}

    while worklist:
        b, a = worklist.pop()
        splitter = blocks[b]
        movers: dict[int, list[int]] = {}
        for t in splitter:
            for s in preds[a][t]:
                movers.setdefault(block_of[s], []).append(s)
        for src, members in movers.items():
            if len(members) == len(blocks[src]):
                continue
            new_id = len(blocks)
            new_block = set(members)
            blocks[src] -= new_block
            blocks.append(new_block)
            for s in new_block:
                block_of[s] = new_id
            smaller = new_id if len(new_block) <= len(blocks[src]) else src
            for sym in range(n_letters):
                if (src, sym) in worklist:
                    worklist.add((new_id, sym))
                else:
                    worklist.add((smaller, sym))

    reps = [min(block) for block in blocks]
    states = tuple(d.states[reps[b]] for b in range(len(blocks)))
    delta = tuple(
        tuple(block_of[d.delta[reps[b]][a]] for a in range(n_letters))
        for b in range(len(blocks))
    )
    accepting = frozenset(block_of[s] for s in d.accepting)
    merged = ExplicitDfa(states, block_of[d.initial], delta, accepting, d.partition)
    return _bfs_renumber(merged)


def export_dot(d: ExplicitDfa) -> str:
    """Graphviz rendering; accepting states are double circles and edges
    are grouped per source/target pair with their letter set as label."""
    lines = ["digraph dfa {", "  rankdir=LR;", '  init [shape=point, label=""];']
    for s in range(d.n_states):
        shape = "doublecircle" if s in d.accepting else "circle"
        lines.append(f'  q{s} [shape={shape}, label="q{s}"];')
    lines.append(f"  init -> q{d.initial};")
    for s in range(d.n_states):
        groups: dict[int, list[int]] = {}
        for a in range(d.n_letters):
            groups.setdefault(d.delta[s][a], []).append(a)
        for t in sorted(groups):
            letters = groups[t]
            if len(letters) == d.n_letters:
                label = "*"
            elif len(letters) <= 8:
                label = ",".join(letter_bits(a, d.width) for a in letters)
            else:
                label = f"{len(letters)} letters"
            lines.append(f'  q{s} -> q{t} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_table(d: ExplicitDfa) -> str:
    """Plain text transition table.

    First line ``states N initial I``, then one ``src bits dst`` line per
    transition, and a final ``accepting: ...`` line.
    """
    lines = [f"states {d.n_states} initial {d.initial}"]
    for s in range(d.n_states):
        for a in range(d.n_letters):
            lines.append(f"{s} {letter_bits(a, d.width)} {d.delta[s][a]}")
    lines.append("accepting: " + " ".join(str(s) for s in sorted(d.accepting)))
    return "\n".join(lines) + "\n"
