"""Local cascade products, restricted cascades, global cascade sequences and their realization
through global state detectors driven by a gossip automaton."""

from __future__ import annotations

import functools
import itertools
from collections.abc import Iterable, Sequence
from functools import cached_property

from .automata import (
    AsynchronousAutomaton,
    Transducer,
    accepts,
    chi,
    global_alphabet_of,
    local_alphabet_of,
    run,
    zeta_oracle,
)
from .errors import AlphabetMismatch, NoAcceptingSet
from .gossip import gamma_alphabet, vector_clock_gossip
from .traces import DecoratedAlphabet, Trace


def _pairs(first: Sequence | None, second: Sequence | None):
    if first is None or second is None:
        return None
    return tuple(tuple(itertools.product(s, q)) for s, q in zip(first, second))


def local_cascade(A1: AsynchronousAutomaton, A2: AsynchronousAutomaton, accepting=None) -> AsynchronousAutomaton:
    """``A1 ◦ℓ A2``: the second automaton reads each letter decorated with the first one's ``a``-state.

    Local states of the product at process ``i`` are pairs ``(s_i, q_i)``.
    """
    if A2.alphabet != local_alphabet_of(A1):
        raise AlphabetMismatch("second automaton must read Σ×ℓS of the first")
    step1, step2 = A1.local_step, A2.local_step

    def step(a, r_a):
        s_a = tuple(r[0] for r in r_a)
        q_a = tuple(r[1] for r in r_a)
        return tuple(zip(step1(a, s_a), step2((a, s_a), q_a)))

    return AsynchronousAutomaton(
        A1.alphabet,
        _pairs(A1.local_states, A2.local_states),
        step,
        tuple(zip(A1.initial, A2.initial)),
        accepting,
        signature=("cascade", A1.signature, A2.signature),
    )


def split_state(g: tuple) -> tuple[tuple, tuple]:
    """Split a global state of ``A ◦ℓ B`` into the global states of ``A`` and ``B``."""
    return tuple(p[0] for p in g), tuple(p[1] for p in g)


def component(local, k: int, depth: int):
    """Stage ``k`` (0-based) of a local state nested as ``((s1, s2), s3)...`` over ``depth`` stages."""
    while depth > 1:
        if k == depth - 1:
            return local[1]
        local = local[0]
        depth -= 1
    return local


def nest(parts: Sequence):
    """Inverse of :func:`component`: nest ``(s1, ..., sk)`` left to right."""
    return functools.reduce(lambda x, y: (x, y), parts[1:], parts[0])


class CascadeChain:
    """Stages of a left nested local cascade product ``((A1 ◦ℓ A2) ◦ℓ A3) ...``."""

    def __init__(self, stages: Sequence[AsynchronousAutomaton], accepting=None):
        if not stages:
            raise ValueError("a cascade chain needs at least one stage")
        self.stages = tuple(stages)
        self.accepting = accepting
        prefix = self.stages[0]
        self._prefixes = [prefix]
        for stage in self.stages[1:]:
            prefix = local_cascade(prefix, stage)
            self._prefixes.append(prefix)

    def __len__(self):
        return len(self.stages)

    @property
    def alphabet(self):
        return self.stages[0].alphabet

    def prefix(self, k: int) -> AsynchronousAutomaton:
        """Flattened product of the first ``k`` stages."""
        return self._prefixes[k - 1]

    @cached_property
    def automaton(self) -> AsynchronousAutomaton:
        return self._prefixes[-1].with_accepting(self.accepting)

    def flatten(self) -> AsynchronousAutomaton:
        return self.automaton

    def stage_states(self, g: tuple) -> tuple:
        """Per-stage global states of a flattened global state."""
        n = len(self.stages)
        return tuple(tuple(component(x, k, n) for x in g) for k in range(n))


def lift_hat(B: AsynchronousAutomaton) -> AsynchronousAutomaton:
    """Let ``B`` over ``Σ×ℓS`` read ``(a, s)`` with a global state ``s`` as ``(a, s_a)``."""
    kind = B.alphabet.kind
    if not (isinstance(B.alphabet, DecoratedAlphabet) and kind[0] == "local"):
        raise AlphabetMismatch("lift_hat expects an automaton over Σ×ℓS")
    sigma = B.alphabet.base
    alphabet = DecoratedAlphabet(sigma, ("global", kind[1]))
    step_b = B.local_step

    def step(letter, q_a):
        a, s = letter
        return step_b((a, tuple(s[i] for i in sorted(sigma.loc(a)))), q_a)

    return AsynchronousAutomaton(
        alphabet, B.local_states, step, B.initial, B.accepting, signature=("hat", B.signature)
    )


def unnest_letter(letter, depth: int) -> tuple:
    """Split a gcs letter ``((a, g1), g2)...`` of nesting ``depth`` into ``(a, [g1, g2, ...])``."""
    gs = []
    for _ in range(depth):
        letter, g = letter
        gs.append(g)
    return letter, gs[::-1]


class GlobalCascadeSequence:
    """Stages chained through global state labellings: stage ``k+1`` reads ``Σ_k × S_k``."""

    def __init__(self, stages: Sequence[AsynchronousAutomaton]):
        if not stages:
            raise ValueError("a global cascade sequence needs at least one stage")
        for prev, nxt in zip(stages, stages[1:]):
            if nxt.alphabet != global_alphabet_of(prev):
                raise AlphabetMismatch("each stage must read the global-state labelling of the previous stage")
        self.stages = tuple(stages)

    def __len__(self):
        return len(self.stages)

    @property
    def alphabet(self):
        return self.stages[0].alphabet


def gcs_run(seq: GlobalCascadeSequence, t: Trace) -> tuple:
    """The tuple of stage global states, stage ``k`` running on the ``k-1``-fold labelling of ``t``."""
    states = []
    cur = t
    for k, stage in enumerate(seq.stages):
        states.append(run(stage, cur))
        if k + 1 < len(seq.stages):
            cur = zeta_oracle(stage, cur)
    return tuple(states)


def gcs_zeta(seq: GlobalCascadeSequence, t: Trace) -> Trace:
    """The composed labelling ``ζ_A1 ζ_A2 ...``."""
    cur = t
    for stage in seq.stages:
        cur = zeta_oracle(stage, cur)
    return cur


def gcs_accepts(seq: GlobalCascadeSequence, F, t: Trace) -> bool:
    state = gcs_run(seq, t)
    return bool(F(state)) if callable(F) else state in F


def gcs_from_chain(chain: CascadeChain) -> GlobalCascadeSequence:
    """The gcs ``(A1, Â2, ..., Ân)`` whose per-process states agree with the flattened chain."""
    stages = [chain.stages[0]]
    for k, B in enumerate(chain.stages[1:], start=1):
        sigma = chain.alphabet
        step_b = B.local_step

        def step(letter, q_a, depth=k, step_b=step_b):
            a, gs = unnest_letter(letter, depth)
            d = tuple(nest([g[i] for g in gs]) for i in sorted(sigma.loc(a)))
            return step_b((a, d), q_a)

        stages.append(
            AsynchronousAutomaton(
                global_alphabet_of(stages[-1]), B.local_states, step, B.initial, B.accepting,
                signature=("hat", k, B.signature),
            )
        )
    return GlobalCascadeSequence(stages)


def restricted_cascade(G: Transducer, A: AsynchronousAutomaton, accepting=None) -> AsynchronousAutomaton:
    """``G ◦r A``: ``A`` reads each letter decorated with ``G``'s output on the ``a``-state of ``G``.

    Local states are pairs ``(υ_i, s_i)``. Unless ``accepting`` is given, a
    global state is accepting iff its ``A`` component is, whatever ``G`` did.
    """
    gauto = G.automaton
    if A.alphabet != gamma_alphabet(gauto.alphabet):
        raise AlphabetMismatch("restricted cascade expects an automaton over Σ×Γ")
    step_g, out_g, step_a = gauto.local_step, G.output, A.local_step

    def step(a, r_a):
        u_a = tuple(r[0] for r in r_a)
        s_a = tuple(r[1] for r in r_a)
        return tuple(zip(step_g(a, u_a), step_a((a, out_g(a, u_a)), s_a)))

    if accepting is None and A.accepting is not None:
        def accepting(g, A=A):
            return A.is_accepting(tuple(p[1] for p in g))

    return AsynchronousAutomaton(
        gauto.alphabet,
        _pairs(gauto.local_states, A.local_states),
        step,
        tuple(zip(gauto.initial, A.initial)),
        accepting,
        signature=("restricted", gauto.signature, A.signature),
    )


def relabel_cascade(T: Transducer, B: AsynchronousAutomaton) -> AsynchronousAutomaton:
    """``A ◦ℓ B'`` with ``B'`` reading ``(a, s_a)`` as ``(a, μ(a, s_a))``; accepts by ``B``'s component."""
    A = T.automaton
    mu, step_b = T.output, B.local_step

    def step(letter, q_a):
        a, s_a = letter
        return step_b((a, mu(a, s_a)), q_a)

    Bp = AsynchronousAutomaton(
        local_alphabet_of(A), B.local_states, step, B.initial, signature=("relabel", B.signature)
    )
    accepting = None
    if B.accepting is not None:
        def accepting(g):
            return B.is_accepting(split_state(g)[1])
    return local_cascade(A, Bp, accepting)


def globalstate(A: AsynchronousAutomaton, a, gamma, q_a: Sequence) -> tuple:
    """Best global state of ``A`` known to ``loc(a)``: component ``i`` comes from any ``j`` with
    ``gamma[i][j] == 1``, and falls back to the initial component."""
    loc = sorted(A.alphabet.root.loc(a))
    out = []
    for i in range(len(A.initial)):
        for pos, j in enumerate(loc):
            if gamma[i][j]:
                out.append(q_a[pos][i])
                break
        else:
            out.append(A.initial[i])
    return tuple(out)


def global_state_detector(A: AsynchronousAutomaton) -> AsynchronousAutomaton:
    """``A^g`` over ``Σ×Γ``: every process tracks the best global state of ``A`` it knows."""
    sigma = A.alphabet
    states = None if A.local_states is None else tuple(A.space.states for _ in sigma.processes)

    def step(letter, q_a):
        a, gamma = letter
        s = A.step(globalstate(A, a, gamma, q_a), a)
        return (s,) * len(q_a)

    return AsynchronousAutomaton(
        gamma_alphabet(sigma), states, step, (A.initial,) * sigma.n, signature=("detector", A.signature)
    )


def gossip_compose(A: AsynchronousAutomaton, G: Transducer | None = None):
    """``(A^G, f, ξ)`` with ``A^G = G ◦r A^g``, ``f((υ, q))(i) = q_i(i)`` and ``ξ`` the
    transducer reproducing the global state labelling of ``A``."""
    G = vector_clock_gossip(A.alphabet) if G is None else G
    detector = global_state_detector(A)
    accepting = None
    if A.accepting is not None:
        def accepting(g):
            return A.is_accepting(f(g))
    AG = restricted_cascade(G, detector, accepting)

    def f(g):
        return tuple(g[i][1][i] for i in range(len(g)))

    def xi(a, r_a):
        u_a = tuple(r[0] for r in r_a)
        q_a = tuple(r[1] for r in r_a)
        return globalstate(A, a, G.output(a, u_a), q_a)

    return AG, f, Transducer(AG, xi, kind="xi")


def gcs_compose(seq: GlobalCascadeSequence, G: Transducer | None = None, F=None):
    """``(A_seq^G, f_seq, ξ)`` realizing a global cascade sequence as one asynchronous automaton.

    ``A_seq^G = G ◦r (A1^g ◦ℓ ... ◦ℓ An^g)``; the ``p``-th detector feeds stage
    ``p`` the letter decorated with the best global states of the earlier
    stages. ``ξ`` yields the tuple of best global states of all stages.
    """
    stages = seq.stages
    n = len(stages)
    sigma = stages[0].alphabet
    G = vector_clock_gossip(sigma) if G is None else G
    detectors = [global_state_detector(stages[0])]
    prefix = detectors[0]
    for p in range(1, n):
        Ap = stages[p]
        earlier = stages[:p]

        def step(letter, q_a, Ap=Ap, earlier=earlier, depth=p):
            (a, gamma), d = letter
            inner = a
            for m, Am in enumerate(earlier):
                qm = tuple(component(x, m, depth) for x in d)
                inner = (inner, globalstate(Am, a, gamma, qm))
            s = Ap.step(globalstate(Ap, a, gamma, q_a), inner)
            return (s,) * len(q_a)

        states = None if Ap.local_states is None else tuple(Ap.space.states for _ in sigma.processes)
        det = AsynchronousAutomaton(
            local_alphabet_of(prefix), states, step, (Ap.initial,) * sigma.n, signature=("detector", p, Ap.signature)
        )
        detectors.append(det)
        prefix = local_cascade(prefix, det)

    def f_seq(g):
        return tuple(
            tuple(component(g[i][1], p, n)[i] for i in range(len(g))) for p in range(n)
        )

    accepting = None
    if F is not None:
        def accepting(g):
            s = f_seq(g)
            return bool(F(s)) if callable(F) else s in F

    AG = restricted_cascade(G, prefix, accepting)

    def xi(a, r_a):
        u_a = tuple(r[0] for r in r_a)
        gamma = G.output(a, u_a)
        return tuple(
            globalstate(Am, a, gamma, tuple(component(r[1], m, n) for r in r_a)) for m, Am in enumerate(stages)
        )

    return AG, f_seq, Transducer(AG, xi, kind="xi")


def wpp_decompose(A: AsynchronousAutomaton, B: AsynchronousAutomaton, final: Iterable) -> list:
    """One ``(U, V)`` pair per final global state of ``A ◦ℓ B``: ``U`` accepts by ``A``'s
    component and ``V`` (over ``Σ×ℓS``) by ``B``'s component."""
    if B.alphabet != local_alphabet_of(A):
        raise AlphabetMismatch("second automaton must read Σ×ℓS of the first")
    if final is None:
        raise NoAcceptingSet("explicit final set required")
    pairs = []
    for g in sorted(set(map(tuple, final)), key=repr):
        s, q = split_state(g)
        pairs.append((A.with_accepting({s}), B.with_accepting({q})))
    return pairs


def wpp_accepts(pairs: list, t: Trace) -> bool:
    """Membership in the union of ``L(U) ∩ χ⁻¹(L(V))``."""
    return any(accepts(U, t) and accepts(V, chi(U, t)) for U, V in pairs)
