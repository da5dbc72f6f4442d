import pytest

from ltlfsynth import BenchConfig, basis_suite, build_dfa, gen_rc, minimize


@pytest.fixture(scope="session")
def game_corpus():
    """Synthesis instances with small minimized automata, shared by the
    solver and strategy test modules.  Built once per session."""
    instances = list(basis_suite())
    instances += gen_rc(BenchConfig(length=4, pool=6, seed=0, count=40))
    instances += gen_rc(BenchConfig(length=5, pool=8, seed=1, count=40))
    instances += gen_rc(BenchConfig(length=3, pool=6, seed=2, count=20))
    corpus = []
    for inst in instances:
        d = minimize(build_dfa(inst.formula, inst.partition))
        if d.n_states <= 200:
            corpus.append((inst, d))
    return corpus
