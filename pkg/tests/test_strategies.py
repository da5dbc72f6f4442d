"""Strategy extraction, transducers, replay and verification."""

import itertools
import json
import random

import pytest

from ltlfsynth import (
    Partition,
    Run,
    build_dfa,
    build_explicit_transducer,
    build_symbolic_transducer,
    check_trace,
    encode,
    explicit_from_symbolic,
    export_transducer_dot,
    minimize,
    parse_formula,
    run,
    solve_explicit,
    solve_symbolic,
    synthesize_tau,
    transducer_from_json,
    transducer_to_json,
    verify_strategy,
)


def pipeline(text, inputs, outputs):
    d = minimize(build_dfa(parse_formula(text), Partition(inputs, outputs)))
    sd = encode(d)
    return d, sd, solve_explicit(d), solve_symbolic(sd)


def realizable_subset(game_corpus, limit):
    picked = []
    for inst, d in game_corpus:
        sol = solve_explicit(d)
        if sol.realizable:
            picked.append((inst, d, sol))
        if len(picked) == limit:
            break
    return picked


# -- output functions ----------------------------------------------------------------


def test_tau_reads_only_state_bits_and_witnesses_the_relation(game_corpus):
    checked = 0
    for inst, d in game_corpus:
        sd = encode(d)
        sol = solve_symbolic(sd)
        if not sol.realizable:
            continue
        tau = synthesize_tau(sol)
        m = sd.manager
        assert tau.names == sd.y_names
        for dd in tau.diagrams:
            assert m.support(dd) <= set(sd.z_names), inst.name
        for code in range(sd.n_states):
            env = sd.code_assignment(code)
            if not m.evaluate(sol.w, env):
                continue
            mask = tau.mask_at(env)
            for j, name in enumerate(sd.y_names):
                env[name] = bool(mask >> j & 1)
            assert m.evaluate(sol.t, env), inst.name
        checked += 1
        if checked == 25:
            break
    assert checked == 25


def test_tau_rejects_a_foreign_automaton():
    _, sd1, _, sol1 = pipeline("F y", (), ("y",))
    _, sd2, _, _ = pipeline("F y", (), ("y",))
    assert synthesize_tau(sol1, sd1).diagrams  # own automaton is fine
    with pytest.raises(ValueError, match="different automaton"):
        synthesize_tau(sol1, sd2)


def test_folded_transitions_equal_eta_with_tau_substituted(game_corpus):
    checked = 0
    for inst, d in game_corpus:
        sd = encode(d)
        sol = solve_symbolic(sd)
        if not sol.realizable:
            continue
        st = build_symbolic_transducer(sd, synthesize_tau(sol))
        m = sd.manager
        for code in range(sd.n_states):
            base = sd.code_assignment(code)
            y_mask = st.output_mask(code)
            for x_mask in range(1 << len(sd.x_names)):
                env = dict(base)
                for i, name in enumerate(sd.x_names):
                    env[name] = bool(x_mask >> i & 1)
                for j, name in enumerate(sd.y_names):
                    env[name] = bool(y_mask >> j & 1)
                direct = sum(
                    m.evaluate(sd.eta[j], env) << j for j in range(sd.n_bits)
                )
                assert st.next_code(code, x_mask) == direct, inst.name
        checked += 1
        if checked == 15:
            break
    assert checked == 15


# -- explicit transducers --------------------------------------------------------------


def test_explicit_transducer_keeps_join_outputs(game_corpus):
    for inst, d, sol in realizable_subset(game_corpus, 20):
        t = build_explicit_transducer(d, sol)
        assert t.states == tuple(sorted(sol.winning)), inst.name
        assert t.initial == d.initial
        for s in sol.winning:
            if s in sol.winning_output:
                assert t.omega[s] == sol.winning_output[s], inst.name
                assert set(t.delta[s]) == set(
                    range(1 << len(d.partition.inputs))
                ), inst.name
            else:
                assert s in d.accepting
                assert t.omega[s] == 0
                assert s in t.omega_dontcare
                assert s not in t.delta


def test_unrealizable_instances_refuse_a_transducer():
    d, _, es, _ = pipeline("x", ("x",), ())
    assert not es.realizable
    with pytest.raises(ValueError, match="no winning strategy"):
        build_explicit_transducer(d, es)


def test_unfolded_symbolic_strategy_behaves_identically(game_corpus):
    rng = random.Random(31)
    for inst, d, _ in realizable_subset(game_corpus, 15):
        sd = encode(d)
        sol = solve_symbolic(sd)
        st = build_symbolic_transducer(sd, synthesize_tau(sol))
        et = explicit_from_symbolic(st)
        assert et.initial == sd.z0_code
        inputs = d.partition.inputs
        for _ in range(12):
            seq = [
                [name for name in inputs if rng.random() < 0.5]
                for _ in range(2 * d.n_states + 2)
            ]
            ra = run(st, seq)
            rb = run(et, seq)
            assert ra.accepted_at == rb.accepted_at, inst.name
            assert [(x, y) for x, y, _ in ra.steps] == [
                (x, y) for x, y, _ in rb.steps
            ], inst.name


# -- replaying runs ---------------------------------------------------------------------


def test_run_stops_at_the_first_accepting_step():
    _, sd, es, ss = pipeline("F y", (), ("y",))
    st = build_symbolic_transducer(sd, synthesize_tau(ss))
    r = run(st, [[], [], []])
    assert r.accepted_at == 0  # y comes out immediately
    assert len(r.steps) == 1
    assert r.steps[0][1] == frozenset({"y"})


def test_run_records_inputs_outputs_and_states():
    d, _, es, _ = pipeline("G(x -> WX y)", ("x",), ("y",))
    t = build_explicit_transducer(d, es)
    r = run(t, [["x"], [], ["x"]])
    assert len(r.steps) >= 1
    first_in, first_out, post = r.steps[0]
    assert first_in == frozenset({"x"})
    assert first_out <= {"y"}
    assert isinstance(post, int)


def test_run_rejects_unknown_atoms_and_empty_sequences():
    d, _, es, _ = pipeline("F y", (), ("y",))
    t = build_explicit_transducer(d, es)
    with pytest.raises(ValueError, match="not input atoms: z"):
        run(t, [["z"]])
    with pytest.raises(ValueError, match="must be nonempty"):
        run(t, [])


def test_accepted_runs_satisfy_the_formula(game_corpus):
    rng = random.Random(32)
    accepted = 0
    for inst, d, sol in realizable_subset(game_corpus, 20):
        t = build_explicit_transducer(d, sol)
        inputs = d.partition.inputs
        for _ in range(8):
            seq = [
                [name for name in inputs if rng.random() < 0.5]
                for _ in range(2 * d.n_states + 2)
            ]
            r = run(t, seq)
            if r.accepted_at is None:
                continue
            assert check_trace(inst.formula, r), inst.name
            accepted += 1
    assert accepted > 40  # plenty of plays actually finish


def test_check_trace_needs_an_accepting_run():
    r = Run(steps=((frozenset(), frozenset({"y"}), 0),), accepted_at=None)
    with pytest.raises(ValueError, match="never reached an accepting state"):
        check_trace(parse_formula("F y"), r)


# -- verification -------------------------------------------------------------------------


def test_verify_accepts_honest_strategies_both_ways(game_corpus):
    for inst, d, sol in realizable_subset(game_corpus, 20):
        assert verify_strategy(d, build_explicit_transducer(d, sol)), inst.name
        sd = encode(d)
        ss = solve_symbolic(sd)
        st = build_symbolic_transducer(sd, synthesize_tau(ss))
        assert verify_strategy(d, st), inst.name


def test_verify_catches_a_tampered_output():
    d, _, es, _ = pipeline("F y", (), ("y",))
    t = build_explicit_transducer(d, es)
    assert verify_strategy(d, t)
    t.omega[d.initial] ^= 1  # stop asserting y at the start
    assert not verify_strategy(d, t)


def test_verify_bound_counts_steps_after_the_first_move():
    d, _, es, _ = pipeline("X y", (), ("y",))
    t = build_explicit_transducer(d, es)
    assert not verify_strategy(d, t, bound=0)
    assert verify_strategy(d, t, bound=1)
    assert verify_strategy(d, t, bound=5)


def test_verify_fails_on_states_without_outputs():
    d, _, es, _ = pipeline("F y", (), ("y",))
    t = build_explicit_transducer(d, es)
    del t.omega[d.initial]
    assert not verify_strategy(d, t)


# -- serialization --------------------------------------------------------------------------


def test_json_round_trip_preserves_behaviour(game_corpus):
    rng = random.Random(33)
    for inst, d, sol in realizable_subset(game_corpus, 10):
        t = build_explicit_transducer(d, sol)
        data = json.loads(json.dumps(transducer_to_json(t)))
        back = transducer_from_json(data)
        assert back.partition == t.partition
        assert back.states == t.states
        assert back.initial == t.initial
        assert back.accepting == t.accepting
        assert back.delta == t.delta
        assert back.omega == t.omega
        assert back.omega_dontcare == t.omega_dontcare
        seq = [
            [n for n in d.partition.inputs if rng.random() < 0.5]
            for _ in range(d.n_states + 1)
        ]
        ra, rb = run(t, seq), run(back, seq)
        assert ra == rb, inst.name


def test_json_bit_strings_are_validated():
    d, _, es, _ = pipeline("F y", (), ("y",))
    data = transducer_to_json(build_explicit_transducer(d, es))
    data["omega"] = {s: bits + "1" for s, bits in data["omega"].items()}
    with pytest.raises(ValueError, match="bad output bit string"):
        transducer_from_json(data)


def test_dot_export_labels_edges_with_io_pairs():
    d, _, es, _ = pipeline("G(x -> WX y)", ("x",), ("y",))
    t = build_explicit_transducer(d, es)
    dot = export_transducer_dot(t)
    assert dot.startswith("digraph transducer {")
    assert "doublecircle" in dot
    assert " / " in dot  # input bits / output bits
    assert dot.rstrip().endswith("}")
