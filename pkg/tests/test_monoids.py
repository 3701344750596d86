import random

import pytest

from oracles import run_word
from tracecascade.automata import chi, from_morphism
from tracecascade.catalog import UNIT, diamond_morphism, sink_simulation_pair, reset_morphism, u2_at, u2_monoid_images
from tracecascade.errors import AlphabetMismatch, CommutationViolation, SearchBudgetExceeded
from tracecascade.monoids import (
    Atm,
    async_morphism,
    asynchronous_wreath_morphism,
    check_division,
    check_simulation,
    close_generators,
    compose,
    constant,
    division_witness,
    extend_p_map,
    identity,
    is_aperiodic,
    is_p_map,
    local_alphabet,
    make_transformation,
    morphism,
    carrier_alphabet,
    wreath_morphism_checked,
)
from tracecascade.traces import DistributedAlphabet, enumerate_traces

SHIFT = (1, 2, 0)


def test_u2_closure():
    ident, r1, r2 = u2_monoid_images()
    m = close_generators((1, 2), [r1, r2])
    assert set(m.elements) == {ident, r1, r2}
    assert len(close_generators((1, 2), [])) == 1


def test_cyclic_group():
    m = close_generators((0, 1, 2), [SHIFT])
    assert len(m) == 3
    assert not is_aperiodic(m)


def test_aperiodicity():
    ident, r1, r2 = u2_monoid_images()
    assert is_aperiodic(close_generators((1, 2), [r1, r2]))
    assert is_aperiodic(close_generators((1,), []))
    # a transposition together with a reset: contains the group Z2
    assert not is_aperiodic(close_generators((0, 1), [(1, 0), (0, 0)]))


def test_closure_idempotent_and_monotone():
    rng = random.Random(7)
    for _ in range(40):
        n = rng.randint(1, 4)
        gens = [tuple(rng.randrange(n) for _ in range(n)) for _ in range(rng.randint(0, 3))]
        m = close_generators(range(n), gens)
        again = close_generators(range(n), m.elements)
        assert again.element_set == m.element_set
        extra = tuple(rng.randrange(n) for _ in range(n))
        assert m.element_set <= close_generators(range(n), gens + [extra]).element_set
        for x in m.elements:
            for y in m.elements:
                assert compose(x, y) in m


def two_process_atm():
    return Atm.generate([(0, 1), (0, 1)], [])


def test_p_maps():
    atm = u2_at(DistributedAlphabet(["p", "q"], [("a", ["p"]), ("b", ["q"])]), 0)
    n = len(atm.space)
    assert is_p_map(identity(n), [0], atm)
    r1 = extend_p_map(constant(2, 0), [0], atm)
    assert is_p_map(r1, [0], atm)
    assert r1 == tuple(0 for _ in range(n))
    two = two_process_atm()
    space = two.space
    # p copies q's bit: reads outside P
    copy = make_transformation(space.states, lambda s: (s[1], s[1]))
    assert not is_p_map(copy, [0], two)
    assert is_p_map(copy, [0, 1], two)


def test_extend_p_map():
    atm = Atm.generate([(0, 1), (0, 1), ("x", "y")], [])
    g = extend_p_map(identity(4), [0, 1], atm)
    assert g == identity(len(atm.space))
    swap_first = (2, 3, 0, 1)  # on S_{1,2} enumerated (0,0) (0,1) (1,0) (1,1)
    g = extend_p_map(swap_first, [0, 1], atm)
    assert is_p_map(g, [0, 1], atm)
    for k, s in enumerate(atm.space.states):
        t = atm.space.states[g[k]]
        assert t == (1 - s[0], s[1], s[2])


def test_simulation_examples():
    phi = diamond_morphism()
    assert check_simulation(phi, phi, identity(2))
    assert not check_simulation(phi, phi, (0, 0))
    fphi, fpsi, f = sink_simulation_pair()
    assert check_simulation(fphi, fpsi, f)
    with pytest.raises(AlphabetMismatch):
        check_simulation(phi, fphi, identity(2))


def test_division():
    ident, r1, r2 = u2_monoid_images()
    u2 = close_generators((1, 2), [r1, r2])
    assert check_division(u2, u2)
    assert not check_division(u2, close_generators((1,), []))
    fphi, fpsi, _ = sink_simulation_pair()
    assert check_division(fphi.monoid, fpsi.monoid)
    assert division_witness(fphi.monoid, fpsi.monoid) is not None
    big = close_generators(range(9), [tuple((x + 1) % 9 for x in range(9))])
    with pytest.raises(SearchBudgetExceeded):
        check_division(u2, big)


def example_wreath(A3):
    """``U2[p1]`` then ``U2[p3]``: ``a`` resets p1 to 2, ``c`` resets p3 to 2."""
    phi = reset_morphism(A3, 0, {"a": 2})
    t1 = phi.target
    t2 = u2_at(A3, 2)
    sigma2 = local_alphabet(A3, t1.local_states)
    images = {}
    for letter in sigma2.letters:
        a, _ = letter
        f = constant(2, 1) if a == "c" else identity(2)
        images[letter] = extend_p_map(f, [2], t2)
    t2 = Atm.generate(t2.local_states, images.values())
    psi = async_morphism(sigma2, images, t2)
    return phi, psi


def test_asynchronous_wreath_example(A3):
    phi, psi = example_wreath(A3)
    eta = asynchronous_wreath_morphism(phi, psi)
    assert eta.is_asynchronous()
    wa = eta.wreath["a"]
    assert wa.first == phi.images["a"]
    assert all(g == identity(psi.size) for g in wa.second)
    wc = eta.wreath["c"]
    assert wc.first == identity(phi.size)
    assert len(set(wc.second)) == 1 and wc.second[0] == psi.images[("c", (UNIT, UNIT))]


def test_wreath_second_component_reads_chi(A3):
    phi, psi = example_wreath(A3)
    eta = asynchronous_wreath_morphism(phi, psi)
    A = from_morphism(phi, (1, UNIT, UNIT))
    B = from_morphism(psi, (UNIT, UNIT, 1))
    start = eta.carrier.index(tuple(zip(A.initial, B.initial)))
    for t in enumerate_traces(A3, 4):
        pair = eta.carrier[eta(t)[start]]
        second = tuple(p[1] for p in pair)
        assert second == run_word(B, chi(A, t).word)


def test_identity_second_factor(A3):
    phi = reset_morphism(A3, 0, {"a": 2, "b": 1})
    t2 = u2_at(A3, 2)
    sigma2 = local_alphabet(A3, phi.target.local_states)
    psi = async_morphism(sigma2, {x: identity(len(t2.space)) for x in sigma2.letters}, t2)
    eta = asynchronous_wreath_morphism(phi, psi)
    for a in A3.letters:
        assert eta.wreath[a].first == phi.images[a]
        assert all(g == identity(2) for g in eta.wreath[a].second)


def test_wreath_checked_vacuous(A3):
    phi = morphism(A3, {"a": (1, 0), "b": (0, 0), "c": (0, 1)}, (0, 1))
    sigma2 = carrier_alphabet(A3, 2)
    psi = morphism(sigma2, {(a, x): (1, 1) if a == "c" else (0, 1) for a, x in sigma2.letters}, (0, 1))
    w = wreath_morphism_checked(phi, psi)
    assert w.size == 4


def test_wreath_checked_violation(A3):
    phi = morphism(A3, {"a": (1, 0), "b": (0, 1), "c": (0, 1)}, (0, 1))
    sigma2 = carrier_alphabet(A3, 2)
    images = {}
    for a, x in sigma2.letters:
        images[(a, x)] = ((0, 0) if x == 0 else (1, 1)) if a == "c" else (0, 1)
    psi = morphism(sigma2, images, (0, 1))
    with pytest.raises(CommutationViolation) as exc:
        wreath_morphism_checked(phi, psi)
    assert {exc.value.a, exc.value.b} == {"a", "c"}
