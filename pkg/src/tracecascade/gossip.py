"""The primary order labelling: a poset oracle and a vector clock automaton computing it.

A label is a matrix ``gamma`` (tuple of row tuples of 0/1) where
``gamma[i][j] == 1`` iff the latest ``i``-event and the latest ``j``-event in the
strict past of the event both exist and the first is below the second.
"""

from __future__ import annotations

import itertools
import threading
from collections.abc import Hashable

from .automata import AsynchronousAutomaton, Transducer
from .traces import Alphabet, DecoratedAlphabet, Trace, primary_event

Gamma = tuple


def all_gammas(n: int) -> tuple:
    rows = list(itertools.product((0, 1), repeat=n))
    return tuple(tuple(m) for m in itertools.product(rows, repeat=n))


def gamma_alphabet(alphabet: Alphabet) -> DecoratedAlphabet:
    """``Σ×Γ`` for ``Γ = {0,1}^{P×P}``."""
    n = alphabet.n
    cache = []

    def decorations(a):
        if not cache:
            cache.append(all_gammas(n))
        return cache[0]

    return DecoratedAlphabet(alphabet, "gamma", decorations)


def primary_order(t: Trace, e: int) -> Gamma:
    p = t.poset
    n = t.alphabet.n
    prim = [primary_event(p, e, i) for i in range(n)]
    return tuple(
        tuple(int(prim[i] is not None and prim[j] is not None and p.leq(prim[i], prim[j])) for j in range(n))
        for i in range(n)
    )


def theta_oracle(t: Trace) -> Trace:
    """Decorate every event of ``t`` with its primary order matrix, read off the poset."""
    word = tuple((a, primary_order(t, e)) for e, a in enumerate(t.word))
    return Trace(gamma_alphabet(t.alphabet), word, _normal=True)


class StateStore:
    """Interns hashable values as small integers; lookups are lock free, inserts are serialized."""

    def __init__(self):
        self._ids: dict = {}
        self._values: list = []
        self._lock = threading.Lock()

    def intern(self, value: Hashable) -> int:
        k = self._ids.get(value)
        if k is not None:
            return k
        with self._lock:
            k = self._ids.get(value)
            if k is None:
                k = len(self._values)
                self._values.append(value)
                self._ids[value] = k
            return k

    def value(self, k: int):
        return self._values[k]

    def __len__(self):
        return len(self._values)


class VectorClockGossip(Transducer):
    """Unbounded vector clocks computing the primary order labelling.

    The local state of process ``p`` interns a tuple ``K`` indexed by processes:
    ``K[k]`` is the vector timestamp (event counts per process) of the latest
    ``k``-event in the view of ``p``, or ``None``.
    """

    def __init__(self, alphabet: Alphabet):
        self.store = StateStore()
        n = alphabet.n
        self.n = n
        start = self.store.intern((None,) * n)
        automaton = AsynchronousAutomaton(
            alphabet, None, self._step, (start,) * n, signature=("vector-clock", alphabet)
        )
        super().__init__(automaton, self._gamma, kind="gamma")
        self.alphabet = alphabet

    def _combined(self, ids: tuple) -> list:
        views = [self.store.value(k) for k in ids]
        best = []
        for k in range(self.n):
            clock = None
            for view in views:
                c = view[k]
                if c is not None and (clock is None or c[k] > clock[k]):
                    clock = c
            best.append(clock)
        return best

    def gamma_of(self, best: list) -> Gamma:
        n = self.n
        return tuple(
            tuple(
                int(best[i] is not None and best[j] is not None and best[j][i] >= best[i][i])
                for j in range(n)
            )
            for i in range(n)
        )

    def _gamma(self, a, ids: tuple) -> Gamma:
        return self.gamma_of(self._combined(ids))

    def _step(self, a, ids: tuple) -> tuple:
        best = self._combined(ids)
        loc = self.alphabet.loc(a)
        clock = tuple(
            (best[k][k] if best[k] is not None else 0) + (1 if k in loc else 0) for k in range(self.n)
        )
        for k in loc:
            best[k] = clock
        new = self.store.intern(tuple(best))
        return (new,) * len(ids)

    def clocks(self, state_id: int) -> tuple:
        return self.store.value(state_id)

    def label(self, t: Trace) -> Trace:
        out = super().label(t)
        return Trace(gamma_alphabet(t.alphabet), out.word, _normal=True)


def vector_clock_gossip(alphabet: Alphabet) -> VectorClockGossip:
    return VectorClockGossip(alphabet)
