import threading

from oracles import theta
from tracecascade.automata import decorations
from tracecascade.gossip import StateStore, all_gammas, gamma_alphabet, primary_order, theta_oracle, vector_clock_gossip
from tracecascade.traces import enumerate_traces, from_word

ZERO3 = ((0, 0, 0),) * 3


def test_primary_order_pattern_short(A2):
    abc = theta_oracle(from_word(A2, "abc"))
    assert abc.word[2][1][0][2] == 1
    abac = theta_oracle(from_word(A2, "abac"))
    assert abac.word[3][1][0][2] == 0


def test_minimal_event_zero(A2, A3):
    for sigma in (A2, A3):
        for t in enumerate_traces(sigma, 3):
            if len(t):
                assert primary_order(t, 0) == ZERO3


def test_first_event_on_process_has_zero_diagonal(A3):
    for t in enumerate_traces(A3, 5):
        lab = theta_oracle(t)
        for i in range(3):
            chain = [e for e, a in enumerate(t.word) if i in A3.loc(a)]
            if chain:
                assert lab.word[chain[0]][1][i][i] == 0


def test_oracle_against_brute_force(A1, A2):
    for sigma in (A1, A2):
        for t in enumerate_traces(sigma, 5):
            assert list(decorations(theta_oracle(t))) == theta(sigma, t.word)


def test_vector_clock_equals_oracle(A2, A3):
    for sigma in (A2, A3):
        G = vector_clock_gossip(sigma)
        for t in enumerate_traces(sigma, 5):
            assert G.label(t) == theta_oracle(t)


def test_ab_n_pattern(A2):
    G = vector_clock_gossip(A2)
    for n in range(1, 11):
        yes = G.label(from_word(A2, "ab" * n + "c"))
        no = G.label(from_word(A2, "ab" * n + "ac"))
        assert yes.word[-1][0] == "c" and yes.word[-1][1][0][2] == 1
        assert no.word[-1][0] == "c" and no.word[-1][1][0][2] == 0


def test_gamma_alphabet(A2):
    sigma = gamma_alphabet(A2)
    assert len(all_gammas(2)) == 16
    assert len(sigma.letters) == 3 * 512
    assert ("a", ZERO3) in sigma


def test_state_store_concurrent_interning():
    store = StateStore()
    values = [(k % 50, "x") for k in range(2000)]
    out = [None] * 4

    def work(slot):
        out[slot] = [store.intern(v) for v in values]

    threads = [threading.Thread(target=work, args=(k,)) for k in range(4)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    assert all(o == out[0] for o in out)
    assert len(store) == 50
    assert all(store.value(store.intern(v)) == v for v in values[:50])
