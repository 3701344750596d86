import pytest

from fixtures import random_automaton, theta_propagation
from oracles import order, run_word, strict_past_word
from tracecascade.automata import (
    AsynchronousAutomaton,
    accepts,
    apply_transducer,
    chi,
    commutation_audit,
    decorations,
    from_morphism,
    run,
    strip,
    transition_atm,
    zeta_oracle,
)
from tracecascade.catalog import (
    UNIT,
    broken_reset_morphism,
    diamond_morphism,
    example_reset_automaton,
    d_after_a_chain,
    reset_morphism,
)
from tracecascade.cascade import component
from tracecascade.errors import AlphabetMismatch, NoAcceptingSet, NotAMap
from tracecascade.traces import DistributedAlphabet, concat, empty, enumerate_traces, from_word, linearizations


def test_run_empty(A3):
    A = example_reset_automaton()
    assert run(A, empty(A3)) == A.initial


def test_diamond_runs():
    phi = diamond_morphism()
    assert [phi.carrier[x] for x in phi.trajectory(0, "cb")] == [1, 1, 2]
    assert [phi.carrier[x] for x in phi.trajectory(0, "bc")] == [1, 2, 2]
    assert phi.of_word("cb") == phi.of_word("bc")


def test_d_after_a_run_and_accept(A1):
    chain = d_after_a_chain()
    A = chain.automaton
    g = run(A, from_word(A1, "abcd"))
    assert component(g[2], 3, 4) == "t2"
    assert accepts(A, from_word(A1, "abcd"))
    assert not accepts(A, from_word(A1, "ad"))


def test_accepting_extremes(A3):
    A = example_reset_automaton()
    none = A.with_accepting(set())
    everything = A.with_accepting(A.space.states)
    for t in enumerate_traces(A3, 3):
        assert not accepts(none, t)
        assert accepts(everything, t)
    with pytest.raises(NoAcceptingSet):
        accepts(A.with_accepting(None), empty(A3))


def test_run_alphabet_mismatch(A1):
    with pytest.raises(AlphabetMismatch):
        run(example_reset_automaton(), empty(A1))


def test_linearization_invariance(A1, A2, A3):
    fixtures = [example_reset_automaton(), d_after_a_chain().automaton]
    fixtures += [random_automaton(s, seed) for seed, s in enumerate((A1, A2, A3))]
    for A in fixtures:
        for t in enumerate_traces(A.alphabet, 5):
            states = {run_word(A, u) for u in linearizations(t)}
            assert states == {run(A, t)}


def test_commutation_audit(A1):
    assert commutation_audit(random_automaton(A1, 3)) == []
    assert commutation_audit(d_after_a_chain().automaton) == []


def test_transition_monoids(A1, A3):
    _, phi = transition_atm(example_reset_automaton())
    assert len(phi.monoid) == 3
    ident = AsynchronousAutomaton(A3, [(0,), (0,), (0,)], lambda a, s: s, (0, 0, 0))
    assert len(transition_atm(ident)[1].monoid) == 1
    _, phi = transition_atm(d_after_a_chain().stages[0])
    assert len(phi.monoid) == 2


def test_from_morphism(A3):
    A = example_reset_automaton()
    assert A.local_states == ((1, 2), (UNIT,), (UNIT,))
    assert run(A, from_word(A3, "ab")) == (2, UNIT, UNIT)
    assert run(A, from_word(A3, "ba")) == (1, UNIT, UNIT)
    with pytest.raises(NotAMap) as exc:
        from_morphism(broken_reset_morphism(), (1, UNIT, UNIT))
    assert exc.value.letter == "c"
    phi = reset_morphism(A3, 0, {})
    B = from_morphism(phi, (1, UNIT, UNIT))
    for t in enumerate_traces(A3, 3):
        assert run(B, t) == B.initial


def test_chi_example(A3):
    A = example_reset_automaton()
    t = chi(A, from_word(A3, "abc"))
    assert t.word == (("a", (1,)), ("b", (1, UNIT)), ("c", (UNIT, UNIT)))
    assert len(chi(A, empty(A3))) == 0
    assert strip(t) == from_word(A3, "abc")


def test_chi_factorization(A1):
    A = random_automaton(A1, 11)
    for t in enumerate_traces(A1, 4):
        s = run(A, t)
        for a in A1.letters:
            ta = concat(t, from_word(A1, [a]))
            expected = chi(A, t).word + ((a, tuple(s[i] for i in A.loc(a))),)
            assert chi(A, ta) == type(ta)(chi(A, ta).alphabet, expected)


def test_apply_transducer_identity(A3):
    A = example_reset_automaton()
    for t in enumerate_traces(A3, 4):
        assert decorations(apply_transducer(A, lambda a, s: s, t)) == decorations(chi(A, t))
        assert set(decorations(apply_transducer(A, lambda a, s: 0, t))) <= {0}


def test_theta_i_propagation(A1, A2):
    for sigma in (A1, A2):
        for i in range(sigma.n):
            A, mu = theta_propagation(sigma, i)
            for t in enumerate_traces(sigma, 5):
                below = order(sigma, t.word)
                expected = tuple(
                    int(any(f != e and below[f][e] and i in sigma.loc(t.word[f]) for f in range(len(t))))
                    for e in range(len(t))
                )
                assert decorations(apply_transducer(A, mu, t)) == expected


def test_zeta_example(A3):
    A = example_reset_automaton()
    z = zeta_oracle(A, from_word(A3, "abc"))
    assert z.word[2] == ("c", (2, UNIT, UNIT))
    assert chi(A, from_word(A3, "abc")).word[2] == ("c", (UNIT, UNIT))
    assert len(zeta_oracle(A, empty(A3))) == 0


def test_zeta_against_past_runs(A2):
    A = random_automaton(A2, 5)
    for t in enumerate_traces(A2, 4):
        z = zeta_oracle(A, t)
        for e in range(len(t)):
            assert z.word[e][1] == run_word(A, strict_past_word(A2, t.word, e))


def test_zeta_sequential_equals_chi():
    sigma = DistributedAlphabet(["p"], [("a", ["p"]), ("b", ["p"])])
    A = random_automaton(sigma, 2, sizes=[3])
    for t in enumerate_traces(sigma, 4):
        assert decorations(zeta_oracle(A, t)) == decorations(chi(A, t))
