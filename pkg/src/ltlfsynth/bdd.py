"""A reduced ordered binary decision diagram engine.

Classic Bryant-style implementation: a unique table maps
``(level, low, high)`` to one node, so semantically equal functions share
one handle and equality is handle identity.  Handles are plain ints; 0
and 1 are the terminals.  The variable order is fixed at construction,
there is no dynamic reordering.

Besides the usual connectives and quantifiers this manager implements
simultaneous substitution (``compose``) and witness extraction for
output variables (``solve_outputs``), which is where strategies come
from.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

__all__ = ["DdManager", "NodeLimitError", "DEFAULT_NODE_CAP"]

DEFAULT_NODE_CAP = 1 << 24


class NodeLimitError(RuntimeError):
    """Raised when the unique table outgrows the configured cap."""


class DdManager:
    """Shared store for one ordered family of diagrams.

    Handles from different managers must not be mixed; all operations
    return handles valid in this manager only.
    """

    FALSE = 0
    TRUE = 1

    def __init__(self, var_order: Sequence[str], node_cap: int = DEFAULT_NODE_CAP):
        names = list(var_order)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        self.var_names: tuple[str, ...] = tuple(names)
        self.level_of: dict[str, int] = {name: k for k, name in enumerate(names)}
        self.node_cap = node_cap
        # Parallel arrays indexed by handle; terminals sit at 0 and 1 with
        # a level below any real variable.
        n_levels = len(names)
        self._level = [n_levels, n_levels]
        self._low = [0, 1]
        self._high = [0, 1]
        self._nlk = n_levels + 2
        # Handles stay below node_cap, so multi-handle cache keys pack
        # into single integers; every operation keeps its own table.
        self._unique: dict[int, int] = {}
        self._ite_c: dict[int, int] = {}
        self._and_c: dict[int, int] = {}
        self._or_c: dict[int, int] = {}
        self._not_c: dict[int, int] = {}
        self._quant_c: dict[int, int] = {}
        self._compose_c: dict[int, int] = {}
        self._restrict_c: dict[int, int] = {}
        # Variable sets and substitutions get small interned ids so the
        # packed keys above stay cheap to build.
        self._levels_memo: dict[tuple[str, ...], tuple[int, ...]] = {}
        self._levels_ids: dict[tuple[int, ...], int] = {}
        self._subst_ids: dict[tuple, int] = {}

    # -- structure ---------------------------------------------------------

    def __len__(self) -> int:
        return len(self._level)

    def _node(self, level: int, low: int, high: int) -> int:
        if low == high:
            return low
        cap = self.node_cap
        key = (level * cap + low) * cap + high
        unique = self._unique
        found = unique.get(key)
        if found is not None:
            return found
        handle = len(self._level)
        if handle >= cap:
            raise NodeLimitError(f"diagram node cap of {cap} reached")
        self._level.append(level)
        self._low.append(low)
        self._high.append(high)
        unique[key] = handle
        return handle

    def var(self, name: str) -> int:
        """Handle of the projection function of ``name``."""
        return self._node(self.level_of[name], 0, 1)

    def const(self, value: bool) -> int:
        return 1 if value else 0

    def level(self, f: int) -> int:
        return self._level[f]

    def top_name(self, f: int) -> str:
        return self.var_names[self._level[f]]

    def cofactors(self, f: int, level: int) -> tuple[int, int]:
        """(f with the level's var false, f with it true)."""
        if self._level[f] == level:
            return self._low[f], self._high[f]
        return f, f

    # -- connectives -------------------------------------------------------

    def ite(self, g: int, h: int, e: int) -> int:
        if g == 1:
            return h
        if g == 0:
            return e
        if h == e:
            return h
        if h == 1 and e == 0:
            return g
        cap = self.node_cap
        key = (g * cap + h) * cap + e
        cache = self._ite_c
        found = cache.get(key)
        if found is not None:
            return found
        lv = self._level
        lo, hi = self._low, self._high
        lg, lh, le = lv[g], lv[h], lv[e]
        level = lg
        if lh < level:
            level = lh
        if le < level:
            level = le
        if lg == level:
            g0, g1 = lo[g], hi[g]
        else:
            g0 = g1 = g
        if lh == level:
            h0, h1 = lo[h], hi[h]
        else:
            h0 = h1 = h
        if le == level:
            e0, e1 = lo[e], hi[e]
        else:
            e0 = e1 = e
        r0 = self.ite(g0, h0, e0)
        r1 = self.ite(g1, h1, e1)
        result = r0 if r0 == r1 else self._node(level, r0, r1)
        cache[key] = result
        return result

    def neg(self, f: int) -> int:
        if f <= 1:
            return 1 - f
        cache = self._not_c
        found = cache.get(f)
        if found is not None:
            return found
        result = self._node(
            self._level[f], self.neg(self._low[f]), self.neg(self._high[f])
        )
        cache[f] = result
        return result

    def conj(self, a: int, b: int) -> int:
        if a > b:
            a, b = b, a
        if a == 0:
            return 0
        if a == 1 or a == b:
            return b
        key = a * self.node_cap + b
        cache = self._and_c
        found = cache.get(key)
        if found is not None:
            return found
        lv = self._level
        la, lb = lv[a], lv[b]
        level = la if la < lb else lb
        a0, a1 = (self._low[a], self._high[a]) if la == level else (a, a)
        b0, b1 = (self._low[b], self._high[b]) if lb == level else (b, b)
        r0 = self.conj(a0, b0)
        r1 = self.conj(a1, b1)
        result = r0 if r0 == r1 else self._node(level, r0, r1)
        cache[key] = result
        return result

    def disj(self, a: int, b: int) -> int:
        if a > b:
            a, b = b, a
        if a == 1:
            return 1
        if a == 0 or a == b:
            return b
        key = a * self.node_cap + b
        cache = self._or_c
        found = cache.get(key)
        if found is not None:
            return found
        lv = self._level
        la, lb = lv[a], lv[b]
        level = la if la < lb else lb
        a0, a1 = (self._low[a], self._high[a]) if la == level else (a, a)
        b0, b1 = (self._low[b], self._high[b]) if lb == level else (b, b)
        r0 = self.disj(a0, b0)
        r1 = self.disj(a1, b1)
        result = r0 if r0 == r1 else self._node(level, r0, r1)
        cache[key] = result
        return result

    def xor(self, a: int, b: int) -> int:
        if a > b:
            a, b = b, a
        return self.ite(a, self.neg(b), b)

    def implies(self, a: int, b: int) -> int:
        return self.ite(a, b, 1)

    def conj_all(self, fs: Iterable[int]) -> int:
        out = 1
        for f in fs:
            out = self.conj(out, f)
        return out

    def disj_all(self, fs: Iterable[int]) -> int:
        out = 0
        for f in fs:
            out = self.disj(out, f)
        return out

    # -- quantifiers -------------------------------------------------------

    def _levels_tuple(self, names: Iterable[str]) -> tuple[tuple[int, ...], int]:
        names = tuple(names)
        found = self._levels_memo.get(names)
        if found is None:
            found = tuple(sorted(self.level_of[n] for n in names))
            self._levels_memo[names] = found
        lid = self._levels_ids.get(found)
        if lid is None:
            lid = len(self._levels_ids)
            self._levels_ids[found] = lid
        return found, lid

    def exists(self, names: Iterable[str], f: int) -> int:
        """Existential quantification over a set of variables."""
        levels, lid = self._levels_tuple(names)
        return self._quant(levels, lid, 0, f, True)

    def forall(self, names: Iterable[str], f: int) -> int:
        """Universal quantification over a set of variables."""
        levels, lid = self._levels_tuple(names)
        return self._quant(levels, lid, 0, f, False)

    def _quant(
        self, levels: tuple[int, ...], lid: int, i: int, f: int, existential: bool
    ) -> int:
        if f <= 1:
            return f
        top = self._level[f]
        n = len(levels)
        while i < n and levels[i] < top:
            i += 1
        if i == n:
            return f
        key = ((lid * self._nlk + i) * 2 + existential) * self.node_cap + f
        cache = self._quant_c
        found = cache.get(key)
        if found is not None:
            return found
        low, high = self._low[f], self._high[f]
        if levels[i] == top:
            a = self._quant(levels, lid, i + 1, low, existential)
            if existential:
                result = (
                    1 if a == 1
                    else self.disj(a, self._quant(levels, lid, i + 1, high, True))
                )
            else:
                result = (
                    0 if a == 0
                    else self.conj(a, self._quant(levels, lid, i + 1, high, False))
                )
        else:
            r0 = self._quant(levels, lid, i, low, existential)
            r1 = self._quant(levels, lid, i, high, existential)
            result = r0 if r0 == r1 else self._node(top, r0, r1)
        cache[key] = result
        return result

    # -- substitution ------------------------------------------------------

    def compose(self, f: int, substitution: Mapping[str, int]) -> int:
        """Simultaneous substitution of functions for variables.

        Every variable in ``substitution`` is replaced at once by the
        given diagram; unmentioned variables stay themselves.
        """
        by_level = {self.level_of[name]: g for name, g in substitution.items()}
        key_id = tuple(sorted(by_level.items()))
        sid = self._subst_ids.get(key_id)
        if sid is None:
            sid = len(self._subst_ids)
            self._subst_ids[key_id] = sid
        return self._compose(f, by_level, sid * self.node_cap)

    def _compose(self, f: int, by_level: dict[int, int], base: int) -> int:
        if f <= 1:
            return f
        key = base + f
        cache = self._compose_c
        found = cache.get(key)
        if found is not None:
            return found
        level = self._level[f]
        low = self._compose(self._low[f], by_level, base)
        high = self._compose(self._high[f], by_level, base)
        g = by_level.get(level)
        if g is None:
            g = self._node(level, 0, 1)
        result = self.ite(g, high, low)
        cache[key] = result
        return result

    def restrict(self, f: int, name: str, value: bool) -> int:
        """Cofactor of ``f`` with one variable fixed."""
        level = self.level_of[name]
        return self._restrict(f, level, value)

    def _restrict(self, f: int, level: int, value: bool) -> int:
        if f <= 1 or self._level[f] > level:
            return f
        if self._level[f] == level:
            return self._high[f] if value else self._low[f]
        key = (level * 2 + value) * self.node_cap + f
        cache = self._restrict_c
        found = cache.get(key)
        if found is not None:
            return found
        result = self._node(
            self._level[f],
            self._restrict(self._low[f], level, value),
            self._restrict(self._high[f], level, value),
        )
        cache[key] = result
        return result

    # -- evaluation and inspection -----------------------------------------

    def evaluate(self, f: int, assignment: Mapping[str, bool]) -> bool:
        """Value of ``f`` under a (sufficiently defined) assignment."""
        while f > 1:
            name = self.var_names[self._level[f]]
            try:
                value = assignment[name]
            except KeyError:
                raise ValueError(f"assignment misses variable {name!r}") from None
            f = self._high[f] if value else self._low[f]
        return f == 1

    def support(self, f: int) -> set[str]:
        names: set[str] = set()
        seen: set[int] = set()
        stack = [f]
        while stack:
            g = stack.pop()
            if g <= 1 or g in seen:
                continue
            seen.add(g)
            names.add(self.var_names[self._level[g]])
            stack.append(self._low[g])
            stack.append(self._high[g])
        return names

    # -- boolean synthesis ---------------------------------------------------

    def solve_outputs(self, f: int, outputs: Sequence[str]) -> list[int]:
        """Witness functions for ``outputs``, resolved left to right.

        Returns one diagram per output; the j-th may mention inputs and
        earlier outputs only.  Whenever some assignment of the outputs
        satisfies ``f`` for given inputs, plugging the witnesses in does
        too.  Ties prefer the false branch, so unconstrained outputs come
        out all-false.
        """
        m = len(outputs)
        projected = [0] * (m + 1)
        projected[m] = f
        for j in range(m - 1, -1, -1):
            projected[j] = self.exists([outputs[j]], projected[j + 1])
        witnesses: list[int] = []
        for j, name in enumerate(outputs):
            f0 = self.restrict(projected[j + 1], name, False)
            f1 = self.restrict(projected[j + 1], name, True)
            witnesses.append(self.conj(self.neg(f0), f1))
        return witnesses

    # -- debugging -----------------------------------------------------------

    def to_dot(self, f: int) -> str:
        lines = ["digraph bdd {", '  t0 [shape=box, label="0"];', '  t1 [shape=box, label="1"];']
        seen: set[int] = set()
        stack = [f]
        while stack:
            g = stack.pop()
            if g <= 1 or g in seen:
                continue
            seen.add(g)
            lines.append(f'  n{g} [label="{self.var_names[self._level[g]]}"];')
            for child, style in ((self._low[g], "dashed"), (self._high[g], "solid")):
                target = f"t{child}" if child <= 1 else f"n{child}"
                lines.append(f"  n{g} -> {target} [style={style}];")
                stack.append(child)
        lines.append("}")
        return "\n".join(lines) + "\n"
