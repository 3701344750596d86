"""Compilation of local temporal formulas into cascades of localized two-state resets, and back.

Every stage is a reset automaton at one process ``p`` with states ``1`` and
``2`` there (``2`` reads as true) and a single state elsewhere. A stage decides
at each ``p``-event whether to reset to 1, reset to 2 or keep its state, and
the decision depends only on the letter and on the pre-event bits of earlier
stages that the letter can see: the bits at ``loc(a)`` in a local cascade, or
all bits in a global cascade sequence.

Stages are allocated bottom-up over the formula:

* ``hold S[j] witness`` gets a stage at ``j`` holding the value the formula
  would have at the next ``j``-event: reset to 2 on ``witness``, keep on
  ``hold``, reset to 1 otherwise.
* ``E[j] α`` and ``Y[j] α`` share a stage at ``j`` recording whether ``α``
  held at the latest ``j``-event.

Letters, constants and boolean connectives need no stage.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Hashable
from dataclasses import dataclass, field

from ..automata import AsynchronousAutomaton, global_alphabet_of, local_alphabet_of
from ..cascade import CascadeChain, GlobalCascadeSequence, component, nest, restricted_cascade, unnest_letter
from ..catalog import UNIT
from ..errors import NotResetChain, WrongFragment
from ..gossip import gamma_alphabet, vector_clock_gossip
from ..monoids import TransformationMonoid, close_generators, is_aperiodic
from ..traces import Alphabet
from .semantics import lift_tilde
from .syntax import (
    FALSE,
    TRUE,
    And,
    Const,
    ExistsMax,
    Formula,
    Fragment,
    Letter,
    Letters,
    Not,
    Or,
    Prev,
    Since,
    Yleq,
    conjunction,
    disjunction,
    fragment_of,
    is_trace_formula,
    subformulas,
    to_text,
)

LOW, HIGH = 1, 2


@dataclass(frozen=True)
class LocalizedReset:
    """A two-state reset at process ``p``: letters in ``r1`` reset to 1, in ``r2`` to 2, the rest keep.

    ``decide(letter)`` returns 1, 2 or None; it is how compiled stages are
    given, since their decorated alphabets are too large to list.
    """

    alphabet: Alphabet
    process: int
    decide: Callable[[Hashable], int | None]
    initial: int = LOW
    label: str = ""
    signature: Hashable = None

    @classmethod
    def from_sets(cls, alphabet: Alphabet, p: int, r1, r2, initial: int = LOW, label: str = ""):
        r1, r2 = frozenset(r1), frozenset(r2)
        if r1 & r2:
            raise ValueError("reset sets must be disjoint")
        for x in r1 | r2:
            if p not in alphabet.loc(x):
                raise ValueError(f"reset letter {x!r} is not a letter of process {p}")

        def decide(letter):
            return LOW if letter in r1 else HIGH if letter in r2 else None

        return cls(alphabet, p, decide, initial, label, ("sets", p, r1, r2, initial))

    def resets(self, value: int) -> frozenset:
        return frozenset(x for x in self.alphabet.letters if p_in(self, x) and self.decide(x) == value)

    def automaton(self) -> AsynchronousAutomaton:
        alphabet, p, decide = self.alphabet, self.process, self.decide
        loc = alphabet.loc

        def step(letter, q_a):
            order = sorted(loc(letter))
            if p not in order:
                return q_a
            r = decide(letter)
            if r is None:
                return q_a
            return tuple(r if i == p else v for i, v in zip(order, q_a))

        states = [(LOW, HIGH) if i == p else (UNIT,) for i in range(alphabet.n)]
        initial = [self.initial if i == p else UNIT for i in range(alphabet.n)]
        sig = self.signature if self.signature is not None else ("reset", p, id(self))
        A = AsynchronousAutomaton(alphabet, states, step, initial, signature=sig)
        A.reset_spec = self
        return A


def p_in(reset: LocalizedReset, letter) -> bool:
    return reset.process in reset.alphabet.loc(letter)


@dataclass
class _Stage:
    process: int
    kind: str
    formula: Formula
    decide: Callable = None


@dataclass
class Compiled:
    """A compiled formula: stage descriptions plus the automaton-level artefacts."""

    formula: Formula
    stages: list
    accept: Callable
    chain: CascadeChain | None = None
    sequence: GlobalCascadeSequence | None = None
    accepting: Callable | None = None
    automaton: AsynchronousAutomaton | None = None
    extra: dict = field(default_factory=dict)

    def describe(self, alphabet=None) -> list[str]:
        out = []
        for k, s in enumerate(self.stages):
            proc = alphabet.processes[s.process] if alphabet is not None else str(s.process + 1)
            out.append(f"stage {k + 1}: U2[{proc}] {s.kind} {to_text(s.formula, alphabet)}")
        return out


class _Builder:
    """Allocates stages for the temporal subformulas of one formula."""

    def __init__(self, sigma: Alphabet, mode: str):
        self.sigma = sigma
        self.mode = mode
        self.stages: list[_Stage] = []
        self.truth: dict = {}
        self.keep: list = []
        self.recorders: dict = {}

    def _recorder(self, j: int, alpha: Formula, kind: str) -> int:
        key = (j, id(alpha))
        if key not in self.recorders:
            inner = self.event(alpha)

            def decide(a, bit, inner=inner):
                return HIGH if inner(a, bit) else LOW

            self.stages.append(_Stage(j, kind, alpha, decide))
            self.keep.append(alpha)
            self.recorders[key] = len(self.stages) - 1
        return self.recorders[key]

    def event(self, f: Formula):
        """Truth of ``f`` at an event with letter ``a`` as a function of ``(a, bit)``."""
        for node in subformulas(f):
            if id(node) not in self.truth:
                self.truth[id(node)] = (node, self._make(node))
        return self.truth[id(f)][1]

    def _make(self, f):
        loc = self.sigma.loc
        t = lambda g: self.truth[id(g)][1]  # noqa: E731
        if isinstance(f, Letter):
            name = f.name
            return lambda a, bit: a == name
        if isinstance(f, Letters):
            members = f.members
            return lambda a, bit: a in members
        if isinstance(f, Const):
            value = f.value
            return lambda a, bit: value
        if isinstance(f, Not):
            x = t(f.arg)
            return lambda a, bit: not x(a, bit)
        if isinstance(f, Or):
            x, y = t(f.left), t(f.right)
            return lambda a, bit: x(a, bit) or y(a, bit)
        if isinstance(f, And):
            x, y = t(f.left), t(f.right)
            return lambda a, bit: x(a, bit) and y(a, bit)
        if isinstance(f, Since):
            j = f.i
            hold, witness = t(f.hold), t(f.witness)

            def decide(a, bit):
                if witness(a, bit):
                    return HIGH
                if hold(a, bit):
                    return None
                return LOW

            self.stages.append(_Stage(j, "since", f, decide))
            k = len(self.stages) - 1
            return lambda a, bit: j in loc(a) and bit(k)
        if isinstance(f, Prev):
            if self.mode != "global":
                raise WrongFragment("Y[i] needs a global cascade sequence")
            k = self._recorder(f.i, f.arg, "latest")
            return lambda a, bit: bit(k)
        if isinstance(f, Yleq):
            raise WrongFragment("Yleq constants must be lifted before compiling")
        if isinstance(f, ExistsMax):
            raise WrongFragment("E[i] cannot occur inside an event formula")
        raise TypeError(f"not a formula: {f!r}")

    def trace(self, f: Formula):
        """The acceptance condition as a function of the final stage bits."""
        if isinstance(f, ExistsMax):
            k = self._recorder(f.i, f.arg, "latest")
            return lambda bit: bit(k)
        if isinstance(f, Const):
            value = f.value
            return lambda bit: value
        if isinstance(f, Not):
            x = self.trace(f.arg)
            return lambda bit: not x(bit)
        if isinstance(f, Or):
            x, y = self.trace(f.left), self.trace(f.right)
            return lambda bit: x(bit) or y(bit)
        if isinstance(f, And):
            x, y = self.trace(f.left), self.trace(f.right)
            return lambda bit: x(bit) and y(bit)
        raise WrongFragment("expected a trace formula: a boolean combination of E[i] ...")


def _build(beta: Formula, sigma: Alphabet, mode: str):
    if not is_trace_formula(beta):
        raise WrongFragment("expected a trace formula: a boolean combination of E[i] ...")
    b = _Builder(sigma, mode)
    accept = b.trace(beta)
    if not b.stages:
        # a chain needs a stage; this one never moves
        b.stages.append(_Stage(0, "idle", FALSE, lambda a, bit: None))
    return b, accept


def _local_chain(sigma: Alphabet, stages: list, accept) -> CascadeChain:
    autos = []
    prefix = None
    n = len(stages)
    for k, st in enumerate(stages):
        procs = tuple(s.process for s in stages[:k])

        if k == 0:
            def decide(letter, st=st):
                return st.decide(letter, _no_bits)
            alphabet = sigma
        else:
            def decide(letter, st=st, k=k, procs=procs):
                a, d = letter
                order = sorted(sigma.loc(a))

                def bit(m):
                    return component(d[order.index(procs[m])], m, k) == HIGH

                return st.decide(a, bit)
            alphabet = local_alphabet_of(prefix)
        reset = LocalizedReset(alphabet, st.process, decide, LOW, st.kind, ("compiled", k, st.process, id(st)))
        autos.append(reset.automaton())
        prefix = autos[0] if k == 0 else CascadeChain(autos).automaton
    procs = tuple(s.process for s in stages)

    def accepting(g):
        return accept(lambda m: component(g[procs[m]], m, n) == HIGH)

    return CascadeChain(autos, accepting)


def _global_sequence(sigma: Alphabet, stages: list, accept):
    autos = []
    for k, st in enumerate(stages):
        if k == 0:
            def decide(letter, st=st):
                return st.decide(letter, _no_bits)
            alphabet = sigma
        else:
            def decide(letter, st=st, k=k):
                a, gs = unnest_letter(letter, k)
                return st.decide(a, lambda m: gs[m][stages[m].process] == HIGH)
            alphabet = global_alphabet_of(autos[-1])
        reset = LocalizedReset(alphabet, st.process, decide, LOW, st.kind, ("compiled-g", k, st.process, id(st)))
        autos.append(reset.automaton())
    seq = GlobalCascadeSequence(autos)

    def F(state):
        return accept(lambda m: state[m][stages[m].process] == HIGH)

    return seq, F


def _no_bits(m):
    raise AssertionError("the first stage reads no earlier stage")


def compile_sprtl(beta: Formula, sigma: Alphabet) -> Compiled:
    """A local cascade of resets accepting exactly the traces satisfying ``beta`` (Since-only)."""
    if fragment_of(beta) is not Fragment.SINCE_ONLY:
        raise WrongFragment(f"compile_sprtl accepts Since-only formulas, got {fragment_of(beta).value}")
    b, accept = _build(beta, sigma, "local")
    chain = _local_chain(sigma, b.stages, accept)
    return Compiled(beta, b.stages, accept, chain=chain, accepting=chain.accepting, automaton=chain.automaton)


def compile_restricted(beta: Formula, sigma: Alphabet, G=None) -> Compiled:
    """Lift Yleq constants onto the primary order decorations and cascade behind a gossip automaton."""
    if fragment_of(beta) not in (Fragment.SINCE_ONLY, Fragment.WITH_YLEQ):
        raise WrongFragment(f"compile_restricted accepts Since/Yleq formulas, got {fragment_of(beta).value}")
    lifted = lift_tilde(beta, sigma)
    inner = compile_sprtl(lifted, gamma_alphabet(sigma))
    G = vector_clock_gossip(sigma) if G is None else G
    AG = restricted_cascade(G, inner.automaton)
    out = Compiled(beta, inner.stages, inner.accept, chain=inner.chain, accepting=AG.accepting, automaton=AG)
    out.extra["lifted"] = lifted
    out.extra["gossip"] = G
    return out


def compile_gcs(beta: Formula, sigma: Alphabet) -> Compiled:
    """A global cascade sequence of resets for Since/Y formulas, with its acceptance predicate."""
    if fragment_of(beta) not in (Fragment.SINCE_ONLY, Fragment.WITH_PREV):
        raise WrongFragment(f"compile_gcs accepts Since/Y formulas, got {fragment_of(beta).value}")
    b, accept = _build(beta, sigma, "global")
    seq, F = _global_sequence(sigma, b.stages, accept)
    return Compiled(beta, b.stages, accept, sequence=seq, accepting=F)


def _reset_shape(A: AsynchronousAutomaton):
    """``(p, low, high)`` of a localized two-state automaton, or ``(None, s, s)`` if it is trivial."""
    binary = [i for i, s in enumerate(A.local_states) if len(s) != 1]
    if len(binary) > 1 or any(len(A.local_states[i]) != 2 for i in binary):
        raise NotResetChain("every stage must have two states at one process and one state elsewhere")
    if not binary:
        return None, None, None
    p = binary[0]
    low, high = A.local_states[p]
    return p, low, high


def decompile_sprtl(chain: CascadeChain) -> Formula:
    """A Since-only trace formula equivalent to a local cascade of localized resets."""
    if chain.accepting is None:
        raise NotResetChain("the chain has no accepting set")
    sigma = chain.alphabet
    shapes = [_reset_shape(A) for A in chain.stages]
    pre: list[Formula] = []
    final: list[Formula] = []
    for k, A in enumerate(chain.stages):
        p, low, high = shapes[k]
        if p is None:
            pre.append(FALSE)
            final.append(FALSE)
            continue
        rho = {LOW: [], HIGH: []}
        for a in sigma.letters:
            order = sorted(sigma.loc(a))
            if p not in order:
                continue
            seen = [m for m in range(k) if shapes[m][0] in order]
            for bits in itertools.product((False, True), repeat=len(seen)):
                value = dict(zip(seen, bits))

                def state(m, q):
                    pm, lo, hi = shapes[m]
                    if pm == q:
                        return hi if value[m] else lo
                    return chain.stages[m].initial[q]

                if k == 0:
                    letter = a
                else:
                    letter = (a, tuple(nest([state(m, q) for m in range(k)]) for q in order))
                results = []
                for cur in (low, high):
                    q_a = tuple(cur if q == p else A.initial[q] for q in order)
                    new = A.local_step(letter, q_a)
                    results.append(new[order.index(p)])
                if results == [low, high]:
                    continue
                if results == [low, low]:
                    target = LOW
                elif results == [high, high]:
                    target = HIGH
                else:
                    raise NotResetChain(f"letter {a!r} permutes the states of stage {k + 1}")
                cond = [Letter(a)] + [pre[m] if value[m] else Not(pre[m]) for m in seen]
                rho[target].append(conjunction(cond))
        r1, r2 = disjunction(rho[LOW]), disjunction(rho[HIGH])
        starts_high = A.initial[p] == high
        before = Since(p, Not(r1), r2)
        if starts_high:
            before = Or(before, Not(Since(p, TRUE, Or(r1, r2))))
        pre.append(before)
        after = Or(r2, And(Not(r1), before))
        fin = ExistsMax(p, after)
        if starts_high:
            fin = Or(fin, Not(ExistsMax(p, TRUE)))
        final.append(fin)

    n = len(chain.stages)
    automaton = chain.automaton

    def global_state(bits):
        out = []
        for i in range(sigma.n):
            parts = []
            for m in range(n):
                pm, lo, hi = shapes[m]
                if pm == i:
                    parts.append(hi if bits[m] else lo)
                else:
                    parts.append(chain.stages[m].initial[i])
            out.append(nest(parts))
        return tuple(out)

    def expand(bits):
        if len(bits) == n:
            return TRUE if automaton.is_accepting(global_state(bits)) else FALSE
        if shapes[len(bits)][0] is None:
            return expand(bits + (False,))
        lo, hi = expand(bits + (False,)), expand(bits + (True,))
        if lo == hi and isinstance(lo, Const):
            return lo
        m = len(bits)
        return _ite(final[m], hi, lo)

    return expand(())


def _ite(cond: Formula, yes: Formula, no: Formula) -> Formula:
    if yes == TRUE and no == FALSE:
        return cond
    if yes == FALSE and no == TRUE:
        return Not(cond)
    if no == FALSE:
        return And(cond, yes)
    if yes == FALSE:
        return And(Not(cond), no)
    if no == TRUE:
        return Or(Not(cond), yes)
    if yes == TRUE:
        return Or(cond, no)
    return Or(And(cond, yes), And(Not(cond), no))


def reachable_monoid(A: AsynchronousAutomaton) -> TransformationMonoid:
    """Transition monoid restricted to the global states reachable from the initial state."""
    letters = A.alphabet.letters
    seen = {A.initial: 0}
    order = [A.initial]
    k = 0
    while k < len(order):
        s = order[k]
        k += 1
        for a in letters:
            nxt = A.step(s, a)
            if nxt not in seen:
                seen[nxt] = len(order)
                order.append(nxt)
    gens = [tuple(seen[A.step(s, a)] for s in order) for a in letters]
    return close_generators(order, gens)


def chain_is_aperiodic(A: AsynchronousAutomaton) -> bool:
    return is_aperiodic(reachable_monoid(A))
