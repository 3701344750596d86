"""Asynchronous automata, their runs, and the event decorations they induce."""

from __future__ import annotations

import itertools
from collections.abc import Callable, Hashable, Iterable, Mapping, Sequence
from functools import cached_property

from .errors import AlphabetMismatch, NoAcceptingSet, NotAMap
from .monoids import (
    Atm,
    GlobalSpace,
    TraceMorphism,
    async_morphism,
    close_generators,
    is_p_map,
    restrict_p_map,
)
from .traces import Alphabet, DecoratedAlphabet, Trace

GlobalState = tuple
LocalStep = Callable[[Hashable, tuple], tuple]


class AsynchronousAutomaton:
    """Per-process local states updated letter by letter on ``loc(a)`` only.

    ``step(a, s_a)`` maps the tuple of local states of the processes in
    ``loc(a)`` (ascending process order) to the new tuple. ``local_states`` may
    be ``None`` for automata whose states are materialized lazily; operations
    that need the full state space then refuse. ``accepting`` is a set of
    global states, a predicate on global states, or ``None``.
    """

    def __init__(
        self,
        alphabet: Alphabet,
        local_states: Sequence[Sequence] | None,
        step: LocalStep,
        initial: Sequence,
        accepting=None,
        *,
        signature: Hashable | None = None,
    ):
        self.alphabet = alphabet
        self.local_states = None if local_states is None else tuple(tuple(s) for s in local_states)
        self._step = step
        self.initial = tuple(initial)
        if len(self.initial) != alphabet.n:
            raise ValueError("initial state must have one component per process")
        if accepting is not None and not callable(accepting):
            accepting = frozenset(tuple(s) for s in accepting)
        self.accepting = accepting
        if signature is None:
            if self.local_states is None:
                signature = ("lazy", id(self))
            else:
                signature = self.local_states
        self.signature = signature
        self._locs = {}

    def loc(self, a) -> tuple[int, ...]:
        try:
            return self._locs[a]
        except KeyError:
            order = tuple(sorted(self.alphabet.loc(a)))
            self._locs[a] = order
            return order

    def local_step(self, a, s_a: tuple) -> tuple:
        return self._step(a, s_a)

    def step(self, s: GlobalState, a) -> GlobalState:
        order = self.loc(a)
        new = self._step(a, tuple(s[i] for i in order))
        out = list(s)
        for i, v in zip(order, new):
            out[i] = v
        return tuple(out)

    def run_word(self, word: Iterable) -> GlobalState:
        s = self.initial
        for a in word:
            s = self.step(s, a)
        return s

    def is_accepting(self, s: GlobalState) -> bool:
        if self.accepting is None:
            raise NoAcceptingSet("automaton has no accepting set")
        if callable(self.accepting):
            return bool(self.accepting(s))
        return s in self.accepting

    def with_accepting(self, accepting) -> "AsynchronousAutomaton":
        return AsynchronousAutomaton(
            self.alphabet, self.local_states, self._step, self.initial, accepting, signature=self.signature
        )

    @cached_property
    def space(self) -> GlobalSpace:
        if self.local_states is None:
            raise ValueError("automaton has no finite state space")
        return GlobalSpace(self.local_states)

    def local_table(self, a) -> dict:
        """The local transition of ``a`` as an explicit table on ``S_a``."""
        order = self.loc(a)
        sub = itertools.product(*(self.local_states[i] for i in order))
        return {s: self._step(a, s) for s in sub}

    def accepting_states(self) -> frozenset:
        """The accepting set as explicit global states."""
        if self.accepting is None:
            raise NoAcceptingSet("automaton has no accepting set")
        if callable(self.accepting):
            return frozenset(s for s in self.space.states if self.accepting(s))
        return self.accepting

    def __repr__(self):
        return f"AsynchronousAutomaton({self.alphabet!r}, initial={self.initial!r})"


def from_tables(
    alphabet: Alphabet,
    local_states: Sequence[Sequence],
    tables: Mapping,
    initial: Sequence,
    accepting=None,
) -> AsynchronousAutomaton:
    """Automaton from per-letter dictionaries ``s_a -> s_a'``; missing entries are identity."""
    frozen = {a: dict(tables.get(a, {})) for a in alphabet.letters}
    for a, table in frozen.items():
        order = sorted(alphabet.loc(a))
        for src, dst in table.items():
            for tup in (src, dst):
                if len(tup) != len(order) or any(v not in local_states[i] for i, v in zip(order, tup)):
                    raise ValueError(f"transition {src}->{dst} of {a!r} leaves S_a")

    def step(a, s_a):
        return frozen[a].get(s_a, s_a)

    return AsynchronousAutomaton(alphabet, local_states, step, initial, accepting)


def from_local_maps(
    alphabet: Alphabet,
    local_states: Sequence[Sequence],
    maps: Mapping[Hashable, LocalStep],
    initial: Sequence,
    accepting=None,
    **kwargs,
) -> AsynchronousAutomaton:
    """Automaton whose letter ``a`` acts by ``maps[a](s_a)``; absent letters act as identity."""

    def step(a, s_a):
        f = maps.get(a)
        return s_a if f is None else tuple(f(s_a))

    return AsynchronousAutomaton(alphabet, local_states, step, initial, accepting, **kwargs)


def _check_alphabet(A: AsynchronousAutomaton, t: Trace) -> None:
    if t.alphabet != A.alphabet:
        raise AlphabetMismatch(f"trace over {t.alphabet!r}, automaton over {A.alphabet!r}")


def run(A: AsynchronousAutomaton, t: Trace) -> GlobalState:
    _check_alphabet(A, t)
    return A.run_word(t.word)


def accepts(A: AsynchronousAutomaton, t: Trace) -> bool:
    return A.is_accepting(run(A, t))


def local_alphabet_of(A: AsynchronousAutomaton) -> DecoratedAlphabet:
    """``Σ×ℓS`` for ``A``: letters ``(a, s_a)``."""
    if A.local_states is None:
        decorations = None
    else:
        states = A.local_states

        def decorations(a):
            return itertools.product(*(states[i] for i in A.loc(a)))

    return DecoratedAlphabet(A.alphabet, ("local", A.signature), decorations)


def global_alphabet_of(A: AsynchronousAutomaton) -> DecoratedAlphabet:
    """``Σ×S`` for ``A``: letters ``(a, s)`` with ``s`` a global state."""
    decorations = None if A.local_states is None else (lambda a: A.space.states)
    return DecoratedAlphabet(A.alphabet, ("global", A.signature), decorations)


def transition_atm(A: AsynchronousAutomaton) -> tuple[Atm, TraceMorphism]:
    space = A.space
    images = {}
    for a in A.alphabet.letters:
        images[a] = tuple(space.index[A.step(s, a)] for s in space.states)
    atm = Atm(space.local_states, close_generators(space.states, images.values()))
    return atm, async_morphism(A.alphabet, images, atm)


def from_morphism(phi: TraceMorphism, initial: Sequence) -> AsynchronousAutomaton:
    atm = phi.target
    if atm is None:
        raise AlphabetMismatch("morphism must target an asynchronous transformation monoid")
    tables = {}
    for a in phi.alphabet.letters:
        loc = phi.alphabet.loc(a)
        if not is_p_map(phi.images[a], loc, atm):
            raise NotAMap(a)
        sub = atm.space.sub_states(loc)
        f = restrict_p_map(phi.images[a], loc, atm)
        tables[a] = {sub[k]: sub[f[k]] for k in range(len(sub))}
    return from_tables(phi.alphabet, atm.local_states, tables, initial)


def commutation_audit(A: AsynchronousAutomaton) -> list[tuple]:
    """Independent letter pairs whose global transitions fail to commute (normally none)."""
    bad = []
    letters = A.alphabet.letters
    for a, b in itertools.combinations(letters, 2):
        if A.alphabet.independent(a, b):
            for s in A.space.states:
                if A.step(A.step(s, a), b) != A.step(A.step(s, b), a):
                    bad.append((a, b))
                    break
    return bad


def chi(A: AsynchronousAutomaton, t: Trace) -> Trace:
    """Decorate each event with the ``loc(a)`` local states reached on its strict past.

    A single pass in canonical order suffices: components of the running state
    on ``loc(e)`` are only touched by events dependent with ``e``, which all
    precede ``e`` in the poset.
    """
    _check_alphabet(A, t)
    s = A.initial
    out = []
    for a in t.word:
        order = A.loc(a)
        out.append((a, tuple(s[i] for i in order)))
        s = A.step(s, a)
    return Trace(local_alphabet_of(A), tuple(out), _normal=True)


def apply_transducer(A: AsynchronousAutomaton, mu: Callable[[Hashable, tuple], Hashable], t: Trace, kind="output") -> Trace:
    """Decorate each event ``e`` with ``mu(a, s_a)`` where ``(a, s_a)`` is its ``chi`` decoration."""
    decorated = chi(A, t)
    word = tuple((a, mu(a, s_a)) for a, s_a in decorated.word)
    return Trace(DecoratedAlphabet(A.alphabet, kind), word, _normal=True)


def zeta_oracle(A: AsynchronousAutomaton, t: Trace) -> Trace:
    """Decorate each event with the global state reached on its strict past, by re-running ``A``."""
    _check_alphabet(A, t)
    out = []
    for e, a in enumerate(t.word):
        out.append((a, A.run_word(t.past(e).word)))
    return Trace(global_alphabet_of(A), tuple(out), _normal=True)


def decorations(t: Trace) -> tuple:
    """The decoration components of a decorated trace, by event id."""
    return tuple(d for _, d in t.word)


def strip(t: Trace) -> Trace:
    """Forget decorations."""
    alphabet = t.alphabet.base
    return Trace(alphabet, tuple(a for a, _ in t.word), _normal=True)


class Transducer:
    """An automaton with output maps ``output(a, s_a)`` decorating each event."""

    def __init__(self, automaton: AsynchronousAutomaton, output: Callable[[Hashable, tuple], Hashable], kind="output"):
        self.automaton = automaton
        self.output = output
        self.kind = kind

    def label(self, t: Trace) -> Trace:
        return apply_transducer(self.automaton, self.output, t, self.kind)
