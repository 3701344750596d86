"""Poset semantics of formulas and the semantics-preserving rewrites between fragments."""

from __future__ import annotations

from ..errors import WrongFragment
from ..gossip import all_gammas
from ..traces import Alphabet, Trace, primary_event
from .syntax import (
    FALSE,
    TRUE,
    And,
    Const,
    ExistsMax,
    Formula,
    Letter,
    Letters,
    Not,
    Or,
    Prev,
    Since,
    Yleq,
    conjunction,
    disjunction,
    subformulas,
    yeq,
    ylt,
)


class Evaluator:
    """Truth values of event formulas at all events of one trace, memoized per node."""

    def __init__(self, t: Trace):
        self.t = t
        self.p = t.poset
        n = t.alphabet.n
        self.prim = [tuple(primary_event(self.p, e, i) for i in range(n)) for e in range(len(t))]
        self.memo: dict = {}

    def values(self, f: Formula) -> list:
        got = self.memo.get(id(f))
        if got is not None:
            return got[1]
        for node in subformulas(f):
            if id(node) not in self.memo:
                self.memo[id(node)] = (node, self._compute(node))
        return self.memo[id(f)][1]

    def at(self, e: int, f: Formula) -> bool:
        return self.values(f)[e]

    def _v(self, node):
        return self.memo[id(node)][1]

    def _compute(self, f):
        word = self.t.word
        n = len(word)
        if isinstance(f, Letter):
            return [a == f.name for a in word]
        if isinstance(f, Letters):
            return [a in f.members for a in word]
        if isinstance(f, Const):
            return [f.value] * n
        if isinstance(f, Not):
            return [not v for v in self._v(f.arg)]
        if isinstance(f, Or):
            return [x or y for x, y in zip(self._v(f.left), self._v(f.right))]
        if isinstance(f, And):
            return [x and y for x, y in zip(self._v(f.left), self._v(f.right))]
        if isinstance(f, Yleq):
            out = []
            for e in range(n):
                ei, ej = self.prim[e][f.i], self.prim[e][f.j]
                out.append(ei is not None and ej is not None and self.p.leq(ei, ej))
            return out
        if isinstance(f, Prev):
            inner = self._v(f.arg)
            return [self.prim[e][f.i] is not None and inner[self.prim[e][f.i]] for e in range(n)]
        if isinstance(f, Since):
            hold, witness = self._v(f.hold), self._v(f.witness)
            out = [False] * n
            current = False
            for e in self.p.chains[f.i]:
                out[e] = current
                current = witness[e] or (hold[e] and current)
            return out
        if isinstance(f, ExistsMax):
            raise TypeError("ExistsMax is a trace formula, not an event formula")
        raise TypeError(f"not a formula: {f!r}")

    def trace_value(self, f: Formula) -> bool:
        if isinstance(f, ExistsMax):
            last = self.p.last(f.i)
            return last is not None and self.values(f.arg)[last]
        if isinstance(f, Const):
            return f.value
        if isinstance(f, Not):
            return not self.trace_value(f.arg)
        if isinstance(f, Or):
            return self.trace_value(f.left) or self.trace_value(f.right)
        if isinstance(f, And):
            return self.trace_value(f.left) and self.trace_value(f.right)
        raise TypeError(f"not a trace formula: {f!r}")


def eval(t: Trace, f: Formula) -> bool:  # noqa: A001
    """Truth of a trace formula on ``t``."""
    return Evaluator(t).trace_value(f)


def eval_at(t: Trace, e: int, f: Formula) -> bool:
    """Truth of an event formula at event ``e`` of ``t``."""
    return Evaluator(t).at(e, f)


def eval_events(t: Trace, f: Formula) -> list:
    return Evaluator(t).values(f)


def _rebuild(f: Formula, leaf) -> Formula:
    """Bottom-up rewrite; ``leaf(node, new_children)`` returns the replacement or None to keep shape."""
    memo: dict = {}
    for node in subformulas(f):
        if isinstance(node, Not):
            kids = (memo[id(node.arg)],)
        elif isinstance(node, (Or, And)):
            kids = (memo[id(node.left)], memo[id(node.right)])
        elif isinstance(node, Since):
            kids = (memo[id(node.hold)], memo[id(node.witness)])
        elif isinstance(node, (Prev, ExistsMax)):
            kids = (memo[id(node.arg)],)
        else:
            kids = ()
        out = leaf(node, kids)
        if out is None:
            if isinstance(node, Not):
                out = Not(*kids)
            elif isinstance(node, Or):
                out = Or(*kids)
            elif isinstance(node, And):
                out = And(*kids)
            elif isinstance(node, Since):
                out = Since(node.i, *kids)
            elif isinstance(node, Prev):
                out = Prev(node.i, *kids)
            elif isinstance(node, ExistsMax):
                out = ExistsMax(node.i, *kids)
            else:
                out = node
        memo[id(node)] = out
    return memo[id(f)]


def prev_levels(i: int, alpha: Formula, n: int) -> list:
    """``[Y_i^1 α, ..., Y_i^n α]``: the primary ``i``-event is reached through ``m`` hops."""
    levels = [disjunction(And(yeq(i, j), Since(j, FALSE, alpha)) for j in range(n))]
    for _ in range(1, n):
        prev = levels[-1]
        levels.append(disjunction(And(ylt(i, j), Since(j, ylt(i, j), prev)) for j in range(n)))
    return levels


def eliminate_prev(alpha: Formula, n: int) -> Formula:
    """Replace every ``Prev(i, β)`` by ``⋁_{m ≤ n} Y_i^m β`` (``n`` processes)."""

    def leaf(node, kids):
        if isinstance(node, Prev):
            return disjunction(prev_levels(node.i, kids[0], n))
        return None

    return _rebuild(alpha, leaf)


def lift_tilde(alpha: Formula, alphabet: Alphabet) -> Formula:
    """The formula over ``Σ×Γ`` reading primary order constants off the decoration."""
    gammas = all_gammas(alphabet.n)
    cache: dict = {}

    def letters_for(a):
        if a not in cache:
            cache[a] = frozenset((a, g) for g in gammas)
        return cache[a]

    def leaf(node, kids):
        if isinstance(node, Letter):
            return Letters(letters_for(node.name), str(node.name))
        if isinstance(node, Letters):
            out = frozenset()
            for a in node.members:
                out |= letters_for(a)
            return Letters(out, node.label)
        if isinstance(node, Yleq):
            members = frozenset((a, g) for a in alphabet.letters for g in gammas if g[node.i][node.j])
            return Letters(members, f"Yleq({node.i + 1},{node.j + 1})~")
        if isinstance(node, Prev):
            raise WrongFragment("lift_tilde expects a formula without Prev")
        return None

    return _rebuild(alpha, leaf)


def hat_letter(letter) -> Formula:
    """``a ∧ ⋀ Yleq(i,j) ∧ ⋀ ¬Yleq(i,j)`` describing one decorated letter."""
    a, gamma = letter
    n = len(gamma)
    parts = [Letter(a)]
    for i in range(n):
        for j in range(n):
            parts.append(Yleq(i, j) if gamma[i][j] else Not(Yleq(i, j)))
    return conjunction(parts)


def _gamma_condition(gammas: frozenset, n: int) -> Formula:
    """A formula over ``Yleq`` constants true exactly for the matrices in ``gammas``."""
    entries = [(i, j) for i in range(n) for j in range(n)]
    memo: dict = {}

    def build(k, members):
        if not members:
            return FALSE
        if len(members) == 1 << (len(entries) - k):
            return TRUE
        key = (k, members)
        if key in memo:
            return memo[key]
        i, j = entries[k]
        hi = build(k + 1, frozenset(g for g in members if g[i][j]))
        lo = build(k + 1, frozenset(g for g in members if not g[i][j]))
        y = Yleq(i, j)
        if hi == lo:
            out = hi
        elif hi == TRUE and lo == FALSE:
            out = y
        elif hi == FALSE and lo == TRUE:
            out = Not(y)
        elif lo == FALSE:
            out = And(y, hi)
        elif hi == FALSE:
            out = And(Not(y), lo)
        else:
            out = Or(And(y, hi), And(Not(y), lo))
        memo[key] = out
        return out

    return build(0, gammas)


def _hat_set(members) -> Formula:
    by_letter: dict = {}
    for a, gamma in members:
        by_letter.setdefault(a, set()).add(gamma)
    parts = []
    for a in sorted(by_letter, key=repr):
        gammas = frozenset(by_letter[a])
        n = len(next(iter(gammas)))
        cond = _gamma_condition(gammas, n)
        parts.append(Letter(a) if cond == TRUE else And(Letter(a), cond))
    return disjunction(parts)


def lower_hat(alpha: Formula) -> Formula:
    """The formula over ``Σ`` replacing each decorated letter by its primary order description."""

    def leaf(node, kids):
        if isinstance(node, Letter):
            return hat_letter(node.name)
        if isinstance(node, Letters):
            return _hat_set(node.members)
        return None

    return _rebuild(alpha, leaf)


__all__ = [
    "Evaluator",
    "eval",
    "eval_at",
    "eval_events",
    "eliminate_prev",
    "prev_levels",
    "lift_tilde",
    "lower_hat",
]
