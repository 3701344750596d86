"""Small named alphabets, automata and morphisms used throughout the tests and demos."""

from __future__ import annotations

from .automata import AsynchronousAutomaton, from_local_maps, local_alphabet_of
from .cascade import CascadeChain, component
from .monoids import Atm, async_morphism, constant, extend_p_map, identity, make_transformation, morphism
from .traces import DistributedAlphabet

UNIT = "_"


def path_alphabet() -> DistributedAlphabet:
    """Three processes in a line: ``Σ1={a,b}, Σ2={b,c}, Σ3={c,d}``."""
    return DistributedAlphabet(
        ["p1", "p2", "p3"], [("a", ["p1"]), ("b", ["p1", "p2"]), ("c", ["p2", "p3"]), ("d", ["p3"])]
    )


def triangle_alphabet() -> DistributedAlphabet:
    """Three processes in a triangle: ``Σ1={a,c}, Σ2={a,b}, Σ3={b,c}``; no two letters commute."""
    return DistributedAlphabet(
        ["p1", "p2", "p3"], [("a", ["p1", "p2"]), ("b", ["p2", "p3"]), ("c", ["p1", "p3"])]
    )


def chain_alphabet() -> DistributedAlphabet:
    """``loc(a)={p1}, loc(b)={p1,p2}, loc(c)={p2,p3}``."""
    return DistributedAlphabet(["p1", "p2", "p3"], [("a", ["p1"]), ("b", ["p1", "p2"]), ("c", ["p2", "p3"])])


def diamond_alphabet() -> DistributedAlphabet:
    """Two processes with ``Σ1={a,c}, Σ2={a,b}``."""
    return DistributedAlphabet(["p1", "p2"], [("a", ["p1", "p2"]), ("b", ["p2"]), ("c", ["p1"])])


def u2_monoid_images():
    """``(id, r1, r2)`` on the carrier ``(1, 2)``."""
    return identity(2), constant(2, 0), constant(2, 1)


def diamond_morphism():
    """The two-state reset DFA seen as a trace morphism: ``a -> r1, b -> r2, c -> id``."""
    ident, r1, r2 = u2_monoid_images()
    return morphism(diamond_alphabet(), {"a": r1, "b": r2, "c": ident}, (1, 2))


def u2_at(alphabet: DistributedAlphabet, p: int) -> Atm:
    """Local state sets of ``U2[p]``: ``{1, 2}`` at ``p``, a single state elsewhere."""
    states = [(1, 2) if i == p else (UNIT,) for i in range(alphabet.n)]
    return Atm.generate(states, [])


def reset_morphism(alphabet: DistributedAlphabet, p: int, resets: dict):
    """Asynchronous morphism into ``U2[p]``; ``resets[a]`` is 1, 2 or None (identity)."""
    atm = u2_at(alphabet, p)
    images = {}
    for a in alphabet.letters:
        r = resets.get(a)
        f = identity(2) if r is None else constant(2, r - 1)
        images[a] = extend_p_map(f, [p], atm)
    atm = Atm.generate(atm.local_states, images.values())
    return async_morphism(alphabet, images, atm)


def example_reset_automaton() -> AsynchronousAutomaton:
    """``U2[p1]`` over the chain alphabet with ``a -> r1, b -> r2, c -> id``."""
    from .automata import from_morphism

    phi = reset_morphism(chain_alphabet(), 0, {"a": 1, "b": 2})
    return from_morphism(phi, (1, UNIT, UNIT))


def broken_reset_morphism():
    """Same as :func:`example_reset_automaton` but ``c -> r1``; the image of ``c`` is not a c-map."""
    alphabet = chain_alphabet()
    atm = u2_at(alphabet, 0)
    images = {
        "a": extend_p_map(constant(2, 0), [0], atm),
        "b": extend_p_map(constant(2, 1), [0], atm),
        "c": extend_p_map(constant(2, 0), [0], atm),
    }
    atm = Atm.generate(atm.local_states, images.values())
    return async_morphism(alphabet, images, atm)


def _single(alphabet, p, states):
    return [tuple(states) if i == p else (UNIT,) for i in range(alphabet.n)]


def d_after_a_chain() -> CascadeChain:
    """Four localized stages over the path alphabet accepting "some d has an a in its past".

    Stage 1 at p1 moves ``p1 -> p2`` on ``a``. Stage 2 at p2 moves ``q1 -> q2`` on
    ``b`` once stage 1 is in ``p2``. Stage 3 at p3 moves ``s1 -> s2`` on ``c``
    once stage 2 is in ``q2``. Stage 4 at p3 moves ``t1 -> t2`` on ``d`` once
    stage 3 is in ``s2``.
    """
    sigma = path_alphabet()
    A1 = from_local_maps(
        sigma, _single(sigma, 0, ["p1", "p2"]), {"a": lambda s: ("p2",)}, ("p1", UNIT, UNIT)
    )
    stages = [A1]

    A2 = from_local_maps(
        local_alphabet_of(A1),
        _single(sigma, 1, ["q1", "q2"]),
        {("b", ("p2", UNIT)): lambda q: (UNIT, "q2")},
        (UNIT, "q1", UNIT),
    )
    stages.append(A2)
    chain12 = CascadeChain(stages)

    def a3_step(letter, q_a):
        a, d = letter
        if a == "c" and component(d[0], 1, 2) == "q2":
            return (UNIT, "s2")
        return q_a

    A3 = AsynchronousAutomaton(
        local_alphabet_of(chain12.automaton), _single(sigma, 2, ["s1", "s2"]), a3_step, (UNIT, UNIT, "s1")
    )
    stages.append(A3)
    chain123 = CascadeChain(stages)

    def b_step(letter, q_a):
        a, d = letter
        if a == "d" and component(d[0], 2, 3) == "s2":
            return ("t2",)
        return q_a

    B = AsynchronousAutomaton(
        local_alphabet_of(chain123.automaton), _single(sigma, 2, ["t1", "t2"]), b_step, (UNIT, UNIT, "t1")
    )
    stages.append(B)

    def accepting(g):
        return component(g[2], 3, 4) == "t2"

    return CascadeChain(stages, accepting)


def sink_simulation_pair():
    """Two sequential automata over ``{a, b}`` with implicit sinks, and the simulation map."""
    sigma = DistributedAlphabet(["p"], [("a", ["p"]), ("b", ["p"])])
    X = ("q1", "qa", "qb", "qab", "s")
    Y = ("q'1", "q'a", "q'b", "q'ab", "q'ba", "s'")
    ta = {"q1": "qa", "qb": "qab"}
    tb = {"q1": "qb", "qa": "qab"}
    ua = {"q'1": "q'a", "q'b": "q'ba"}
    ub = {"q'1": "q'b", "q'a": "q'ab"}
    phi = morphism(
        sigma,
        {"a": make_transformation(X, lambda x: ta.get(x, "s")), "b": make_transformation(X, lambda x: tb.get(x, "s"))},
        X,
    )
    psi = morphism(
        sigma,
        {"a": make_transformation(Y, lambda y: ua.get(y, "s'")), "b": make_transformation(Y, lambda y: ub.get(y, "s'"))},
        Y,
    )
    fmap = {"q'1": "q1", "q'a": "qa", "q'b": "qb", "q'ab": "qab", "q'ba": "qab", "s'": "s"}
    f = tuple(X.index(fmap[y]) for y in Y)
    return phi, psi, f


def path_u2_morphism():
    """``U_2`` on the path alphabet: ``a -> r1, b -> r2, c -> r1, d -> id``."""
    ident, r1, r2 = u2_monoid_images()
    return morphism(path_alphabet(), {"a": r1, "b": r2, "c": r1, "d": ident}, (1, 2))


def four_element_morphism():
    """A four-element aperiodic monoid on three points, driven by the path alphabet."""
    images = {"a": (0, 0, 0), "b": (0, 0, 1), "c": (0, 1, 0), "d": (0, 0, 0)}
    return morphism(path_alphabet(), images, (0, 1, 2))
