"""Finite-to-infinite embedding and lasso evaluation."""

import itertools
import random

import pytest

from ltlfsynth import (
    TAIL,
    Always,
    And,
    Atom,
    Eventually,
    Implies,
    Lasso,
    Next,
    Not,
    Or,
    Partition,
    Release,
    Until,
    WeakNext,
    eval_lasso,
    eval_trace,
    parse_formula,
    reduce_to_ltl,
    tail_extension,
    validate_reduction,
)
from helpers import all_traces, rand_formula

a, b = Atom("a"), Atom("b")
tail = Atom(TAIL)
P = Partition((), ("a", "b"))


def core_of(problem):
    # embedded = (Tail & (Tail U G !Tail)) & tr(f), left-associated
    return problem.formula.right


# -- the embedding, structurally -----------------------------------------------------


def test_embedding_shape_for_eventually():
    problem = reduce_to_ltl(Eventually(a), P)
    scaffold = And(tail, Until(tail, Always(Not(tail))))
    assert problem.formula == And(scaffold, Eventually(And(tail, a)))
    assert problem.partition.inputs == ()
    assert problem.partition.outputs == ("a", "b", TAIL)
    assert problem.inputs == () and problem.outputs == ("a", "b", TAIL)


def test_embedding_of_a_tautology_is_just_the_scaffold():
    problem = reduce_to_ltl(parse_formula("true"), P)
    assert problem.formula == And(tail, Until(tail, Always(Not(tail))))


@pytest.mark.parametrize(
    "f, core",
    [
        (a, a),
        (Not(a), Not(a)),
        (And(a, b), And(a, b)),
        (Or(a, b), Or(a, b)),
        (Implies(a, b), Implies(a, b)),
        (Next(a), Next(And(tail, a))),
        (WeakNext(a), Next(Implies(tail, a))),
        (Until(a, b), Until(a, And(tail, b))),
        (Release(a, b), Release(a, Implies(tail, b))),
        (Eventually(a), Eventually(And(tail, a))),
        (Always(a), Always(Implies(tail, a))),
        (Until(Next(a), b), Until(Next(And(tail, a)), And(tail, b))),
    ],
)
def test_translation_per_operator(f, core):
    assert core_of(reduce_to_ltl(f, P)) == core


def test_marker_name_is_reserved():
    with pytest.raises(ValueError, match="reserved"):
        reduce_to_ltl(a, Partition((), ("a", TAIL)))
    with pytest.raises(ValueError, match="reserved"):
        reduce_to_ltl(And(a, Atom(TAIL)), P)


# -- lassos ----------------------------------------------------------------------------


def test_lasso_positions_wrap_around():
    w = Lasso(prefix=(frozenset({"a"}),), loop=(frozenset(), frozenset({"b"})))
    assert w.at(0) == {"a"}
    assert w.at(1) == set()
    assert w.at(2) == {"b"}
    assert w.at(3) == set()
    assert w.at(42) == w.at(1 + (42 - 1) % 2)


def test_lasso_loop_must_be_nonempty():
    with pytest.raises(ValueError, match="non-empty"):
        Lasso(prefix=(frozenset(),), loop=())


def test_eval_lasso_checks_the_position_range():
    w = Lasso(prefix=(frozenset({"a"}),), loop=(frozenset(),))
    assert eval_lasso(a, w, 0)
    assert not eval_lasso(a, w, 1)
    with pytest.raises(ValueError, match="outside the prefix plus one loop"):
        eval_lasso(a, w, 2)
    with pytest.raises(ValueError, match="outside"):
        eval_lasso(a, w, -1)


def test_eval_lasso_on_textbook_cases():
    # a only in the loop: F a true, G a false, X X a true from the start
    w = Lasso(prefix=(frozenset(),), loop=(frozenset({"a"}),))
    assert eval_lasso(Eventually(a), w)
    assert not eval_lasso(Always(a), w)
    assert eval_lasso(Next(a), w)
    # b R a with a everywhere and b never: holds forever
    forever = Lasso(prefix=(), loop=(frozenset({"a"}),))
    assert eval_lasso(Release(b, a), forever)
    assert not eval_lasso(Until(a, b), forever)


def sat_forward(f, w: Lasso, i: int) -> bool:
    """Independent reference: forward search with cycle detection."""
    p, L = len(w.prefix), len(w.loop)

    def norm(j: int) -> int:
        return j if j < p else p + (j - p) % L

    def go(g, j: int) -> bool:
        j = norm(j)
        if isinstance(g, Atom):
            return g.name in w.at(j)
        if g.__class__.__name__ == "TrueF":
            return True
        if g.__class__.__name__ == "FalseF":
            return False
        if isinstance(g, Not):
            return not go(g.operand, j)
        if isinstance(g, And):
            return go(g.left, j) and go(g.right, j)
        if isinstance(g, Or):
            return go(g.left, j) or go(g.right, j)
        if isinstance(g, Implies):
            return not go(g.left, j) or go(g.right, j)
        if isinstance(g, (Next, WeakNext)):
            return go(g.operand, j + 1)
        if isinstance(g, (Until, Eventually)):
            hold = (lambda k: True) if isinstance(g, Eventually) else (
                lambda k: go(g.left, k)
            )
            target = g.operand if isinstance(g, Eventually) else g.right
            seen = set()
            k = j
            while True:
                k = norm(k)
                if k in seen:
                    return False
                seen.add(k)
                if go(target, k):
                    return True
                if not hold(k):
                    return False
                k += 1
        # Release / Always: the body must hold until released, possibly forever
        release = (lambda k: False) if isinstance(g, Always) else (
            lambda k: go(g.left, k)
        )
        body = g.operand if isinstance(g, Always) else g.right
        seen = set()
        k = j
        while True:
            k = norm(k)
            if k in seen:
                return True
            seen.add(k)
            if not go(body, k):
                return False
            if release(k):
                return True
            k += 1

    return go(f, norm(i))


def test_eval_lasso_agrees_with_a_forward_search():
    rng = random.Random(41)
    names = ("a", "b")
    for _ in range(300):
        f = rand_formula(rng, names, rng.randint(1, 4))
        prefix = tuple(
            frozenset(n for n in names if rng.random() < 0.5)
            for _ in range(rng.randint(0, 3))
        )
        loop = tuple(
            frozenset(n for n in names if rng.random() < 0.5)
            for _ in range(rng.randint(1, 3))
        )
        w = Lasso(prefix, loop)
        i = rng.randrange(len(prefix) + len(loop))
        assert eval_lasso(f, w, i) == sat_forward(f, w, i), (f, w, i)


# -- tail extensions ----------------------------------------------------------------------


def test_tail_extension_marks_the_trace_and_nothing_else():
    w = tail_extension([{"a"}, set()], padding=[{"b"}], loop=[{"a", TAIL}])
    assert w.prefix == (frozenset({"a", TAIL}), frozenset({TAIL}), frozenset({"b"}))
    assert w.loop == (frozenset({"a"}),)  # marker stripped from the loop
    assert tail_extension([{"a"}]).loop == (frozenset(),)


def test_embedded_formula_matches_finite_evaluation_exhaustively():
    rng = random.Random(42)
    names = ("a", "b")
    formulas = [rand_formula(rng, names, rng.randint(1, 3)) for _ in range(25)]
    formulas += [
        parse_formula("G(a -> X b)"),
        parse_formula("F a & G b"),
        parse_formula("a U (b R a)"),
    ]
    for f in formulas:
        problem = reduce_to_ltl(f, P)
        for n in range(1, 4):
            for trace in all_traces(names, n):
                w = tail_extension(trace)
                assert eval_trace(f, trace) == eval_lasso(problem.formula, w), (
                    f,
                    trace,
                )


def test_embedded_formula_ignores_junk_padding():
    f = parse_formula("G a & F b")
    problem = reduce_to_ltl(f, P)
    trace = (frozenset({"a", "b"}),)
    for padding in ([{"a"}], [{"b"}, set()], [{"a", "b"}]):
        for loop in ([set()], [{"a"}], [{"b"}, {"a"}]):
            w = tail_extension(trace, padding, loop)
            assert eval_lasso(problem.formula, w) == eval_trace(f, trace)


def test_validate_reduction_spot_checks_pass():
    assert validate_reduction(parse_formula("G(a -> X b)"), P)
    assert validate_reduction(
        parse_formula("(x U y) & G(y -> WX x)"),
        Partition(("x",), ("y",)),
        samples=80,
    )
    assert validate_reduction(
        parse_formula("F(a & b) | G !a"), P, rng=random.Random(7)
    )
