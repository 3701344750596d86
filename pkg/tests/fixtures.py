"""Automaton fixtures shared by the module tests and the acceptance suite."""

from __future__ import annotations

import itertools
import random

from tracecascade.automata import AsynchronousAutomaton, from_tables, local_alphabet_of


def random_automaton(alphabet, seed: int, sizes=None, accepting=True) -> AsynchronousAutomaton:
    """Random local transition tables; asynchronous by construction."""
    rng = random.Random(seed)
    sizes = sizes or [2] * alphabet.n
    states = [tuple(range(k)) for k in sizes]
    tables = {}
    for a in alphabet.letters:
        order = sorted(alphabet.loc(a))
        sub = list(itertools.product(*(states[i] for i in order)))
        tables[a] = {s: rng.choice(sub) for s in sub}
    acc = None
    if accepting:
        space = list(itertools.product(*states))
        acc = {s for s in space if rng.random() < 0.4} or {space[-1]}
    return from_tables(alphabet, states, tables, [0] * alphabet.n, acc)


def random_second_stage(first: AsynchronousAutomaton, seed: int, size: int = 2) -> AsynchronousAutomaton:
    """A random automaton over ``Σ×ℓS`` of ``first``."""
    rng = random.Random(seed)
    sigma = local_alphabet_of(first)
    n = first.alphabet.n
    states = [tuple(range(size))] * n
    tables = {}
    for letter in sigma.letters:
        order = sorted(first.alphabet.loc(letter[0]))
        sub = list(itertools.product(*(states[i] for i in order)))
        tables[letter] = {s: rng.choice(sub) for s in sub}

    def step(letter, q_a):
        return tables[letter][q_a]

    return AsynchronousAutomaton(sigma, states, step, [0] * n, signature=("random-second", seed, first.signature))


def theta_propagation(alphabet, i: int):
    """Each process remembers whether an ``i``-event is in its past; the output at ``e`` says the same for ``e``."""
    states = [(0, 1)] * alphabet.n

    def step(a, s_a):
        bit = int(any(s_a) or i in alphabet.loc(a))
        return (bit,) * len(s_a)

    A = AsynchronousAutomaton(alphabet, states, step, [0] * alphabet.n, signature=("theta", i))

    def mu(a, s_a):
        return int(any(s_a))

    return A, mu


# Since-only trace formulas over the path alphabet (nesting depth at most 3).
SINCE_A1 = [
    "E[1] a",
    "!E[1] a",
    "E[3] (true S[3] (false S[3] true))",
    "E[2] ((!b) S[2] c)",
    "E[1] (a & (true S[1] b))",
    "E[3] (d & (true S[3] (c & (true S[2] b))))",
    "E[2] (c | (b S[2] c))",
    "E[1] a | E[3] d",
    "E[2] (!(a S[2] b))",
    "E[3] ((c S[3] d) S[3] d)",
    "E[3] (d & (true S[3] (c & (true S[2] (b & (true S[1] a))))))",
]

# Since-only trace formulas over the chain alphabet.
SINCE_A3 = [
    "E[1] a",
    "E[3] (true S[3] (false S[3] true))",
    "E[2] ((!b) S[2] c)",
    "E[1] (a & (true S[1] b))",
    "E[3] (c & (true S[2] (b & (true S[1] a))))",
    "!E[3] true",
    "E[2] (c | (b S[2] c))",
]

# Trace formulas using the previous-event operator.
PREV_FORMULAS = [
    ("A3", "E[2] Y[1] a"),
    ("A3", "E[1] Y[1] true"),
    ("A3", "E[3] Y[1] (a & Y[2] b)"),
    ("A2", "E[2] (Y[3] c S[2] Y[1] a)"),
    ("A2", "!E[1] Y[3] (true S[3] c)"),
    ("A2", "E[3] (Y[1] a | Y[2] (b & Y[1] c))"),
]

# Event formulas with previous-event operators for the elimination check.
PREV_EVENT_FORMULAS = [
    "Y[1] a",
    "Y[3] c",
    "Y[1] (b & Y[2] a)",
    "(Y[2] b) S[1] (Y[3] true)",
    "!Y[1] (true S[1] a)",
]
