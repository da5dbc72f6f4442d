"""Command line interface.

File formats
------------
Formula file: the formula text in the usual grammar; it may span lines,
and a line whose first non-blank character is ``#`` is a comment::

    # lift the grant after every request
    G (request -> F grant)

Partition file: one ``.inputs:`` line and one ``.outputs:`` line, names
separated by blanks; ``#`` comments allowed::

    .inputs: request
    .outputs: grant

Step files: one trace step per line, atoms assigned as ``name=0`` or
``name=1`` and separated by commas or blanks.  ``run`` expects only the
input atoms per line; ``check`` expects every atom of the partition.

The ``reduce`` output prints the extended partition directives followed
by the embedded formula, in the same concrete syntax.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from .automata import (
    DEFAULT_STATE_CAP,
    StateLimitError,
    atoms_to_letter,
    build_dfa,
    export_dot,
    export_table,
    letter_bits,
    minimize,
)
from .bdd import DEFAULT_NODE_CAP, NodeLimitError
from .bench import BenchConfig, basis_suite, gen_rc, run_suite, write_csv
from .formulas import Formula, Partition, eval_trace, format_formula
from .games import solve_explicit, solve_symbolic
from .parser import ParseError, format_partition, parse_formula, parse_partition
from .plots import render_report
from .reduction import reduce_to_ltl
from .strategies import (
    build_explicit_transducer,
    build_symbolic_transducer,
    explicit_from_symbolic,
    export_transducer_dot,
    run as replay,
    synthesize_tau,
    transducer_from_json,
    transducer_to_json,
    verify_strategy,
)
from .symbolic import encode

__all__ = ["main"]

NODE_CAP_ENV = "SYFT_NODE_CAP"


def read_formula(path: str) -> Formula:
    """Parse a formula file; comment lines are blanked, not dropped, so
    parse errors keep the file's own line numbers."""
    with open(path) as fh:
        lines = [
            "" if raw.lstrip().startswith("#") else raw
            for raw in fh.read().splitlines()
        ]
    return parse_formula("\n".join(lines))


def read_partition(path: str) -> Partition:
    with open(path) as fh:
        return parse_partition(fh.read())


_ASSIGN_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)=([01])$")


def read_steps(path: str, names: tuple[str, ...]) -> list[frozenset[str]]:
    """Read one letter per line; every listed atom must be assigned."""
    letters = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            assignment: dict[str, bool] = {}
            for token in re.split(r"[,\s]+", line):
                m = _ASSIGN_RE.match(token)
                if m is None:
                    raise ValueError(
                        f"{path}:{lineno}: expected name=0 or name=1, got {token!r}"
                    )
                assignment[m.group(1)] = m.group(2) == "1"
            missing = [n for n in names if n not in assignment]
            extra = [n for n in assignment if n not in names]
            if missing or extra:
                detail = []
                if missing:
                    detail.append(f"missing {' '.join(missing)}")
                if extra:
                    detail.append(f"unexpected {' '.join(extra)}")
                raise ValueError(f"{path}:{lineno}: {'; '.join(detail)}")
            letters.append(frozenset(n for n in names if assignment[n]))
    return letters


def _node_cap(args) -> int:
    if args.node_cap is not None:
        return args.node_cap
    return int(os.environ.get(NODE_CAP_ENV, DEFAULT_NODE_CAP))


def _cmd_synth(args) -> int:
    formula = read_formula(args.formula)
    partition = read_partition(args.partition)
    d = minimize(
        build_dfa(formula, partition, state_cap=args.state_cap)
    )
    print(
        f"automaton: {d.n_states} states over {d.width} atoms",
        file=sys.stderr,
    )
    if args.engine == "symbolic":
        sd = encode(d, node_cap=_node_cap(args))
        sol = solve_symbolic(sd)
        realizable = sol.realizable
        print(
            f"fixpoint: {sol.iterations} iterations, "
            f"{len(sd.manager)} diagram nodes",
            file=sys.stderr,
        )
        transducer = None
        if realizable:
            tau = synthesize_tau(sol, sd)
            transducer = explicit_from_symbolic(
                build_symbolic_transducer(sd, tau)
            )
    else:
        sol = solve_explicit(d)
        realizable = sol.realizable
        print(
            f"frame iteration: {sol.rounds} rounds, "
            f"{len(sol.winning)} winning states",
            file=sys.stderr,
        )
        transducer = (
            build_explicit_transducer(d, sol) if realizable else None
        )
    print("REALIZABLE" if realizable else "UNREALIZABLE")
    if transducer is not None:
        if args.verify and not verify_strategy(d, transducer):
            print("extracted strategy failed verification", file=sys.stderr)
            return 2
        if args.out:
            with open(args.out, "w") as fh:
                json.dump(transducer_to_json(transducer), fh, indent=2)
                fh.write("\n")
            print(f"strategy written to {args.out}", file=sys.stderr)
        if args.dot:
            with open(args.dot, "w") as fh:
                fh.write(export_transducer_dot(transducer))
            print(f"strategy graph written to {args.dot}", file=sys.stderr)
    elif args.out or args.dot:
        print("unrealizable: no strategy to write", file=sys.stderr)
    return 0 if realizable else 1


def _cmd_dfa(args) -> int:
    formula = read_formula(args.formula)
    partition = read_partition(args.partition)
    d = build_dfa(formula, partition, state_cap=args.state_cap)
    if not args.no_minimize:
        d = minimize(d)
    sys.stdout.write(export_table(d))
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(export_dot(d))
        print(f"automaton graph written to {args.dot}", file=sys.stderr)
    return 0


def _cmd_run(args) -> int:
    with open(args.transducer) as fh:
        transducer = transducer_from_json(json.load(fh))
    inputs = transducer.partition.inputs
    outputs = transducer.partition.outputs
    letters = read_steps(args.inputs, inputs)
    result = replay(transducer, letters)
    for k, (x_atoms, y_atoms, post) in enumerate(result.steps):
        print(
            f"step {k}: in={letter_bits(atoms_to_letter(x_atoms, inputs), len(inputs))} "
            f"out={letter_bits(atoms_to_letter(y_atoms, outputs), len(outputs))} "
            f"state={post}"
        )
    print(
        "accepted_at "
        + ("none" if result.accepted_at is None else str(result.accepted_at))
    )
    return 0 if result.accepted_at is not None else 1


def _cmd_check(args) -> int:
    formula = read_formula(args.formula)
    partition = read_partition(args.partition)
    trace = tuple(read_steps(args.trace, partition.atoms))
    ok = eval_trace(formula, trace)
    print("SAT" if ok else "UNSAT")
    return 0 if ok else 1


def _cmd_reduce(args) -> int:
    formula = read_formula(args.formula)
    partition = read_partition(args.partition)
    problem = reduce_to_ltl(formula, partition)
    sys.stdout.write(format_partition(problem.partition))
    print(format_formula(problem.formula))
    return 0


def _cmd_bench(args) -> int:
    if args.suite == "basis":
        instances = basis_suite()
    else:
        instances = gen_rc(
            BenchConfig(
                length=args.length,
                pool=args.pool,
                seed=args.seed,
                count=args.count,
            )
        )
    rows = run_suite(
        instances,
        engines=args.engines,
        timeout_s=args.timeout,
        node_cap=_node_cap(args),
    )
    os.makedirs(args.outdir, exist_ok=True)
    csv_path = os.path.join(args.outdir, "results.csv")
    write_csv(rows, csv_path)
    paths = [csv_path] + render_report(rows, args.outdir)
    for engine in sorted({r.engine for r in rows}):
        done = sum(
            1
            for r in rows
            if r.engine == engine and r.verdict in ("REALIZABLE", "UNREALIZABLE")
        )
        total = sum(1 for r in rows if r.engine == engine)
        print(f"{engine}: {done}/{total} completed", file=sys.stderr)
    for p in paths:
        print(p)
    return 0


def _add_problem_args(sub) -> None:
    sub.add_argument("formula", help="formula file")
    sub.add_argument("partition", help="partition file")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ltlfsynth",
        description="Synthesize reactive strategies from finite-trace temporal specifications.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synth", help="decide realizability and extract a strategy")
    _add_problem_args(synth)
    synth.add_argument(
        "--engine", choices=("symbolic", "explicit"), default="symbolic"
    )
    synth.add_argument("--out", help="write the strategy as JSON here")
    synth.add_argument("--dot", help="write the strategy as Graphviz here")
    synth.add_argument(
        "--verify",
        action="store_true",
        help="re-check the extracted strategy before writing it",
    )
    synth.add_argument("--state-cap", type=int, default=DEFAULT_STATE_CAP)
    synth.add_argument(
        "--node-cap",
        type=int,
        default=None,
        help=f"diagram node limit (default ${NODE_CAP_ENV} or {DEFAULT_NODE_CAP})",
    )
    synth.set_defaults(fn=_cmd_synth)

    dfa = sub.add_parser("dfa", help="print the automaton transition table")
    _add_problem_args(dfa)
    dfa.add_argument("--dot", help="write the automaton as Graphviz here")
    dfa.add_argument("--no-minimize", action="store_true")
    dfa.add_argument("--state-cap", type=int, default=DEFAULT_STATE_CAP)
    dfa.set_defaults(fn=_cmd_dfa)

    runp = sub.add_parser("run", help="replay a strategy against an input log")
    runp.add_argument("transducer", help="strategy JSON file")
    runp.add_argument("inputs", help="input step file")
    runp.set_defaults(fn=_cmd_run)

    check = sub.add_parser("check", help="evaluate the formula on a full trace")
    _add_problem_args(check)
    check.add_argument("trace", help="trace step file")
    check.set_defaults(fn=_cmd_check)

    red = sub.add_parser(
        "reduce", help="rewrite over an end-of-trace marker for infinite-trace tools"
    )
    _add_problem_args(red)
    red.set_defaults(fn=_cmd_reduce)

    bench = sub.add_parser("bench", help="time both engines on generated instances")
    bench.add_argument("--outdir", default="bench-out")
    bench.add_argument("--suite", choices=("rc", "basis"), default="rc")
    bench.add_argument("--length", type=int, default=5, help="conjuncts per instance")
    bench.add_argument("--pool", type=int, default=8, help="variable pool size")
    bench.add_argument("--seed", type=int, default=0, help="generator seed")
    bench.add_argument("--count", type=int, default=30, help="number of instances")
    bench.add_argument("--timeout", type=float, default=10.0, help="seconds per run")
    bench.add_argument(
        "--engines",
        nargs="+",
        choices=("explicit", "symbolic"),
        default=("explicit", "symbolic"),
    )
    bench.add_argument("--node-cap", type=int, default=None)
    bench.set_defaults(fn=_cmd_bench)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, ValueError, OSError, StateLimitError, NodeLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
