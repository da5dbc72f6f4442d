"""Synthesis of reactive strategies from finite-trace temporal formulas.

The pipeline: parse a formula and an input/output partition, compile the
formula to a DFA by progression, turn the DFA into a reachability game,
solve the game either explicitly or over binary decision diagrams, and
extract a winning strategy as a transducer.  A separate embedding maps
finite-trace formulas onto standard infinite-trace LTL for external
tools.
"""

from .automata import (
    DEFAULT_STATE_CAP,
    MAX_ATOMS,
    ExplicitDfa,
    StateLimitError,
    build_dfa,
    canonicalize,
    emp,
    export_dot,
    export_table,
    minimize,
    progress,
)
from .bdd import DEFAULT_NODE_CAP, DdManager, NodeLimitError
from .bench import (
    BASIS,
    BasisCase,
    BenchConfig,
    BenchInstance,
    BenchRow,
    basis_suite,
    gen_rc,
    run_suite,
    write_csv,
)
from .formulas import (
    FALSE,
    TRUE,
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
    as_trace,
    atoms_of,
    eval_trace,
    format_formula,
    is_nnf,
    to_nnf,
)
from .games import (
    ExplicitSolution,
    SymbolicSolution,
    oracle_search,
    solve_explicit,
    solve_symbolic,
)
from .parser import ParseError, format_partition, parse_formula, parse_partition
from .plots import render_report
from .reduction import (
    TAIL,
    Lasso,
    LtlProblem,
    eval_lasso,
    reduce_to_ltl,
    tail_extension,
    validate_reduction,
)
from .strategies import (
    ExplicitTransducer,
    OutputFunction,
    Run,
    SymbolicTransducer,
    build_explicit_transducer,
    build_symbolic_transducer,
    check_trace,
    explicit_from_symbolic,
    export_transducer_dot,
    run,
    synthesize_tau,
    transducer_from_json,
    transducer_to_json,
    verify_strategy,
)
from .symbolic import SymbolicDfa, decode, encode

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # formulas
    "Formula", "TrueF", "FalseF", "Atom", "Not", "And", "Or", "Implies",
    "Next", "WeakNext", "Until", "Release", "Eventually", "Always",
    "TRUE", "FALSE", "Partition", "as_trace", "atoms_of", "eval_trace",
    "format_formula", "is_nnf", "to_nnf",
    # parsing
    "ParseError", "parse_formula", "parse_partition", "format_partition",
    # automata
    "ExplicitDfa", "StateLimitError", "build_dfa", "minimize", "progress",
    "emp", "canonicalize", "export_dot", "export_table",
    "MAX_ATOMS", "DEFAULT_STATE_CAP",
    # decision diagrams
    "DdManager", "NodeLimitError", "DEFAULT_NODE_CAP",
    # symbolic encoding
    "SymbolicDfa", "encode", "decode",
    # games
    "ExplicitSolution", "SymbolicSolution",
    "solve_explicit", "solve_symbolic", "oracle_search",
    # strategies
    "OutputFunction", "SymbolicTransducer", "ExplicitTransducer", "Run",
    "synthesize_tau", "build_symbolic_transducer", "build_explicit_transducer",
    "explicit_from_symbolic", "run", "verify_strategy", "check_trace",
    "transducer_to_json", "transducer_from_json", "export_transducer_dot",
    # reduction
    "TAIL", "LtlProblem", "Lasso", "reduce_to_ltl", "eval_lasso",
    "tail_extension", "validate_reduction",
    # benchmarks
    "BasisCase", "BASIS", "BenchConfig", "BenchInstance", "BenchRow",
    "basis_suite", "gen_rc", "run_suite", "write_csv", "render_report",
]
