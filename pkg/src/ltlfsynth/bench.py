"""Benchmark instances and a harness that times both engines on them.

The generator conjoins randomly renamed copies of small hand-written
basis cases over a shared variable pool, which scales difficulty while
keeping every conjunct individually well understood.  Each (instance,
engine) pair runs in a forked child with a wall-clock timeout, so a
blow-up in one run cannot take the harness down with it.
"""

from __future__ import annotations

import csv
import multiprocessing
import random
import time
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Mapping, Sequence

from .automata import build_dfa, minimize
from .bdd import DEFAULT_NODE_CAP
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
    TrueF,
    Until,
    WeakNext,
    atoms_of,
)
from .games import solve_explicit, solve_symbolic
from .parser import parse_formula
from .strategies import synthesize_tau
from .symbolic import encode

__all__ = [
    "BasisCase",
    "BASIS",
    "BenchConfig",
    "BenchInstance",
    "BenchRow",
    "CSV_COLUMNS",
    "basis_suite",
    "gen_rc",
    "run_suite",
    "write_csv",
]


@dataclass(frozen=True)
class BasisCase:
    """A template over placeholder atoms with a known verdict.

    The verdict is frozen here and cross-checked by the test suite, so a
    generated conjunction is built only from individually understood
    parts.
    """

    name: str
    text: str
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    realizable: bool


BASIS: tuple[BasisCase, ...] = (
    BasisCase("hold-out", "G o1", (), ("o1",), True),
    BasisCase("hold-in", "G i1", ("i1",), (), False),
    BasisCase("reach-out", "F o1", (), ("o1",), True),
    BasisCase("reach-in", "F i1", ("i1",), (), False),
    BasisCase("request-grant", "G (i1 -> F o1)", ("i1",), ("o1",), True),
    BasisCase("until-grant", "i1 U o1", ("i1",), ("o1",), True),
    BasisCase("until-wait", "o1 U i1", ("i1",), ("o1",), False),
    BasisCase("release-hold", "i1 R o1", ("i1",), ("o1",), True),
    BasisCase("weak-step", "WX o1", (), ("o1",), True),
    BasisCase("step-out", "X o1", (), ("o1",), True),
    BasisCase("step-in", "X i1", ("i1",), (), False),
    BasisCase("settle", "F (G o1)", (), ("o1",), True),
    BasisCase("hold-or-reach", "G o1 | F i1", ("i1",), ("o1",), True),
    BasisCase("pulse", "F o1 & G (o1 -> WX ! o1)", (), ("o1",), True),
    BasisCase("echo", "F i1 -> F o1", ("i1",), ("o1",), True),
    BasisCase("grant-within-two", "G (i1 -> (o1 | X o1))", ("i1",), ("o1",), True),
    BasisCase("two-step", "F (o1 & X o2)", (), ("o1", "o2"), True),
    BasisCase("hold-and-reach-in", "G o1 & F i1", ("i1",), ("o1",), False),
    BasisCase("nested-until", "o1 U (i1 U o2)", ("i1",), ("o1", "o2"), True),
    BasisCase("strict-react", "G (i1 -> X o1)", ("i1",), ("o1",), False),
    BasisCase("weak-react", "G (i1 -> WX o1)", ("i1",), ("o1",), True),
    BasisCase("dual-grant", "G (i1 -> o1) & G (i2 -> o2)", ("i1", "i2"), ("o1", "o2"), True),
)


@dataclass(frozen=True)
class BenchConfig:
    """Shape of a generated family: conjuncts per instance, pool size,
    base seed and how many instances to draw."""

    length: int
    pool: int
    seed: int = 0
    count: int = 1

    def __post_init__(self) -> None:
        if self.length < 1:
            raise ValueError("need at least one conjunct per instance")
        if self.pool < 1:
            raise ValueError("need at least one pool variable")
        if self.count < 1:
            raise ValueError("need at least one instance")


@dataclass(frozen=True)
class BenchInstance:
    name: str
    formula: Formula
    partition: Partition


def _rename(f: Formula, mapping: Mapping[str, str]) -> Formula:
    if isinstance(f, Atom):
        return Atom(mapping.get(f.name, f.name))
    if isinstance(f, (TrueF, FalseF)):
        return f
    if isinstance(f, (Not, Next, WeakNext, Eventually, Always)):
        return type(f)(_rename(f.operand, mapping))
    if isinstance(f, (And, Or, Implies, Until, Release)):
        return type(f)(_rename(f.left, mapping), _rename(f.right, mapping))
    raise TypeError(f"unknown formula node {f!r}")


def basis_suite() -> list[BenchInstance]:
    """Each basis case as its own instance, placeholders kept as atoms."""
    return [
        BenchInstance(
            name=case.name,
            formula=parse_formula(case.text),
            partition=Partition(case.inputs, case.outputs),
        )
        for case in BASIS
    ]


def gen_rc(
    cfg: BenchConfig, basis: Sequence[BasisCase] = BASIS
) -> list[BenchInstance]:
    """Random conjunctions of renamed basis cases over a split variable pool.

    The first half of the pool is environment-controlled, the second
    half system-controlled; each selected case renames its placeholders
    into fresh samples from the matching half, preserving who controls
    what.  Each instance's partition lists the variables that actually
    occur, in pool order.  All draws come from one generator seeded with
    ``cfg.seed``, so a config always produces the same list and a longer
    count extends a shorter one.
    """
    rng = random.Random(cfg.seed)
    xs = tuple(f"x{i}" for i in range(cfg.pool // 2))
    ys = tuple(f"y{i}" for i in range(cfg.pool - cfg.pool // 2))
    usable = [
        c for c in basis if len(c.inputs) <= len(xs) and len(c.outputs) <= len(ys)
    ]
    if not usable:
        raise ValueError("pool too small for every basis case")
    instances: list[BenchInstance] = []
    for k in range(cfg.count):
        conjuncts = []
        for _ in range(cfg.length):
            case = rng.choice(usable)
            mapping = dict(zip(case.inputs, rng.sample(xs, len(case.inputs))))
            mapping.update(zip(case.outputs, rng.sample(ys, len(case.outputs))))
            conjuncts.append(_rename(parse_formula(case.text), mapping))
        formula = reduce(And, conjuncts)
        used = atoms_of(formula)
        partition = Partition(
            tuple(a for a in xs if a in used), tuple(a for a in ys if a in used)
        )
        instances.append(
            BenchInstance(
                name=f"rc-{cfg.length}x{cfg.pool}-s{cfg.seed}-k{k:02d}",
                formula=formula,
                partition=partition,
            )
        )
    return instances


@dataclass(frozen=True)
class BenchRow:
    name: str
    engine: str
    verdict: str
    dfa_ms: float | None
    solve_ms: float | None
    total_ms: float | None
    states: int | None
    z_bits: int | None
    x_vars: int
    y_vars: int
    timeout_s: float


CSV_COLUMNS = (
    "name",
    "engine",
    "verdict",
    "dfa_ms",
    "solve_ms",
    "total_ms",
    "states",
    "z_bits",
    "x_vars",
    "y_vars",
    "timeout",
)


def _measure(instance: BenchInstance, engine: str, node_cap: int) -> dict:
    """Timed pipeline for one engine; runs inside the worker process.

    ``dfa_ms`` covers construction and minimisation, plus the boolean
    encoding for the symbolic engine; ``solve_ms`` covers the game and,
    when the verdict is positive, extracting the per-state outputs that
    constitute a strategy.  The explicit solver records those outputs as
    its winning set grows; the symbolic one derives an output function
    from its fixpoint relation.
    """
    t0 = time.perf_counter()
    d = minimize(build_dfa(instance.formula, instance.partition))
    z_bits = None
    if engine == "symbolic":
        sd = encode(d, node_cap=node_cap)
        z_bits = sd.n_bits
        t1 = time.perf_counter()
        sol = solve_symbolic(sd)
        if sol.realizable:
            synthesize_tau(sol)
        realizable = sol.realizable
    elif engine == "explicit":
        t1 = time.perf_counter()
        realizable = solve_explicit(d).realizable
    else:
        raise ValueError(f"unknown engine {engine!r}")
    t2 = time.perf_counter()
    return {
        "verdict": "REALIZABLE" if realizable else "UNREALIZABLE",
        "dfa_ms": (t1 - t0) * 1000.0,
        "solve_ms": (t2 - t1) * 1000.0,
        "total_ms": (t2 - t0) * 1000.0,
        "states": d.n_states,
        "z_bits": z_bits,
    }


def _worker(conn, instance: BenchInstance, engine: str, node_cap: int) -> None:
    try:
        conn.send(("ok", _measure(instance, engine, node_cap)))
    except Exception as exc:
        conn.send(("error", f"{type(exc).__name__}: {exc}"))
    finally:
        conn.close()


def run_suite(
    instances: Sequence[BenchInstance],
    engines: Iterable[str] = ("explicit", "symbolic"),
    timeout_s: float = 10.0,
    node_cap: int = DEFAULT_NODE_CAP,
) -> list[BenchRow]:
    """Run every instance under every engine, each in its own process."""
    ctx = multiprocessing.get_context("fork")
    engines = tuple(engines)
    rows: list[BenchRow] = []
    for inst in instances:
        for engine in engines:
            parent, child = ctx.Pipe(duplex=False)
            proc = ctx.Process(
                target=_worker, args=(child, inst, engine, node_cap)
            )
            proc.start()
            child.close()
            payload: dict = {}
            if parent.poll(timeout_s):
                try:
                    kind, data = parent.recv()
                except EOFError:
                    kind, data = "error", "worker exited without a result"
                verdict = data["verdict"] if kind == "ok" else "ERROR"
                if kind == "ok":
                    payload = data
            else:
                verdict = "TIMEOUT"
                proc.terminate()
            proc.join()
            parent.close()
            rows.append(
                BenchRow(
                    name=inst.name,
                    engine=engine,
                    verdict=verdict,
                    dfa_ms=payload.get("dfa_ms"),
                    solve_ms=payload.get("solve_ms"),
                    total_ms=payload.get("total_ms"),
                    states=payload.get("states"),
                    z_bits=payload.get("z_bits"),
                    x_vars=len(inst.partition.inputs),
                    y_vars=len(inst.partition.outputs),
                    timeout_s=timeout_s,
                )
            )
    return rows


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.3f}"
    return str(value)


def write_csv(rows: Iterable[BenchRow], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in rows:
            writer.writerow(
                [
                    r.name,
                    r.engine,
                    r.verdict,
                    _cell(r.dfa_ms),
                    _cell(r.solve_ms),
                    _cell(r.total_ms),
                    _cell(r.states),
                    _cell(r.z_bits),
                    r.x_vars,
                    r.y_vars,
                    _cell(r.timeout_s),
                ]
            )
