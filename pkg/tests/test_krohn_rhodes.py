import itertools

import pytest

from fixtures import random_automaton
from tracecascade.automata import transition_atm
from tracecascade.catalog import four_element_morphism, path_u2_morphism, u2_monoid_images
from tracecascade.errors import HypothesisViolation, NotAcyclic
from tracecascade.krohn_rhodes import (
    acyclic_decompose,
    base_passthrough,
    check_join_hypothesis,
    communication_graph,
    is_acyclic,
    join,
    localize,
    split,
    split_equation_failures,
)
from tracecascade.monoids import check_simulation, close_generators, identity, morphism
from tracecascade.traces import DistributedAlphabet, enumerate_traces

SINGLE = DistributedAlphabet(["p"], [("a", ["p"]), ("b", ["p"])])


def language_preserved(d, max_len):
    """Every (initial point, final set) language of the source is recognized through the map."""
    phi, psi, f = d.source, d.morphism, d.sim_map
    traces = list(enumerate_traces(phi.alphabet, max_len))
    for x in range(phi.size):
        y = f.index(x)
        reach_phi = [phi(t)[x] for t in traces]
        reach_psi = [f[psi(t)[y]] for t in traces]
        for r in range(phi.size + 1):
            for F in itertools.combinations(range(phi.size), r):
                F = set(F)
                if [v in F for v in reach_phi] != [v in F for v in reach_psi]:
                    return False
    return True


def test_communication_graphs(A1, A2):
    g = communication_graph(A1)
    assert sorted(g.edges) == [(0, 1), (1, 2)]
    assert is_acyclic(A1)
    assert sorted(communication_graph(A2).edges) == [(0, 1), (0, 2), (1, 2)]
    assert not is_acyclic(A2)
    assert is_acyclic(SINGLE) and not communication_graph(SINGLE).edges


def random_trace_morphism(sigma, seed):
    return transition_atm(random_automaton(sigma, seed, accepting=False))[1]


def test_split_without_private_letters(A3):
    phi = random_trace_morphism(A3, 3)
    s = split(phi, 2)
    assert s.private == ()
    assert len(s.elements) == 1
    for a in A3.letters:
        assert s.phi2.images[(a, 0)] == phi.images[a]
    assert split_equation_failures(phi, s) == []


def test_split_equation_exhaustive(A1, A3):
    for sigma, p in ((A3, 0), (A1, 0), (A1, 2)):
        for seed in range(4):
            phi = random_trace_morphism(sigma, seed)
            s = split(phi, p)
            assert split_equation_failures(phi, s) == []
            assert check_simulation(phi, s.wreath, s.f)


def test_split_trivial(A3):
    phi = morphism(A3, {a: identity(2) for a in A3.letters}, (0, 1))
    s = split(phi, 0)
    assert len(s.phi1.monoid) == 1
    assert all(img == identity(2) for img in s.phi2.images.values())


def test_join_simulates(A1):
    phi = path_u2_morphism()
    s = split(phi, 0)
    base = base_passthrough(morphism(A1, s.phi1.images, s.phi1.carrier), 0)
    psi1, f1 = localize(base, A1, 0)
    assert check_simulation(s.phi1, psi1, f1)
    check_join_hypothesis(s.phi2, psi1, f1)


def test_join_broken_map(A1):
    phi = path_u2_morphism()
    s = split(phi, 0)
    base = base_passthrough(morphism(A1, s.phi1.images, s.phi1.carrier), 0)
    psi1, f1 = localize(base, A1, 0)
    broken = tuple(0 for _ in f1)
    assert not check_simulation(s.phi1, psi1, broken)


def test_join_hypothesis_violation(A1):
    phi = path_u2_morphism()
    s = split(phi, 0)
    base = base_passthrough(morphism(A1, s.phi1.images, s.phi1.carrier), 0)
    psi1, f1 = localize(base, A1, 0)
    # pretend the two states of p1 track different points for a letter not seen by p1
    ident, r1, r2 = u2_monoid_images()
    bad = morphism(s.phi2.alphabet, {k: (r1 if k == ("c", 0) else r2) for k in s.phi2.alphabet.letters}, (1, 2))
    with pytest.raises(HypothesisViolation):
        check_join_hypothesis(bad, psi1, f1)
    with pytest.raises(HypothesisViolation):
        join(s.phi1, bad, psi1, f1, psi1, f1)


def test_single_process():
    phi = morphism(SINGLE, {"a": (1, 2, 0), "b": (0, 1, 2)}, (0, 1, 2))
    d = acyclic_decompose(phi)
    assert [x.kind for x in d.factors] == ["group"]
    assert not d.factors[0].non_prime
    assert d.verify()
    ident, r1, r2 = u2_monoid_images()
    u2 = acyclic_decompose(morphism(SINGLE, {"a": r1, "b": r2}, (1, 2)))
    assert [x.kind for x in u2.factors] == ["U2"]
    triv = acyclic_decompose(morphism(SINGLE, {"a": ident, "b": ident}, (1, 2)))
    assert [x.kind for x in triv.factors] == ["trivial"]
    tm = acyclic_decompose(morphism(SINGLE, {"a": (1, 0, 0), "b": (0, 0, 0)}, (0, 1, 2)))
    assert tm.factors[0].kind == "tm" and tm.factors[0].non_prime


def test_u2_on_path(A1):
    phi = path_u2_morphism()
    assert phi.is_trace_morphism()
    d = acyclic_decompose(phi)
    assert d.order == ["p1", "p2", "p3"]
    assert [(x.kind, x.process) for x in d.factors] == [("U2", 0), ("U2", 1), ("U2", 2)]
    assert d.verify() and d.full_form
    assert d.morphism.size == 8
    assert language_preserved(d, 4)


def test_four_element_on_path(A1):
    phi = four_element_morphism()
    m = phi.monoid
    assert len(m) == 4
    d = acyclic_decompose(phi)
    assert d.verify()
    assert [x.kind for x in d.factors] == ["U2", "tm", "tm"]
    assert language_preserved(d, 4)
    assert split_equation_failures(phi, split(phi, 0)) == []


def test_not_acyclic(A2):
    ident, r1, r2 = u2_monoid_images()
    with pytest.raises(NotAcyclic):
        acyclic_decompose(morphism(A2, {"a": r1, "b": r2, "c": ident}, (1, 2)))


def test_random_morphisms_on_path(A1):
    for seed in range(3):
        phi = random_trace_morphism(A1, 100 + seed)
        d = acyclic_decompose(phi)
        assert d.verify()
        assert len(close_generators(phi.carrier, phi.images.values())) == len(phi.monoid)
