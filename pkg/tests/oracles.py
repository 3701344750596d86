"""Brute-force reference computations used to derive and check expected values.

Nothing here calls into the package's poset, evaluator or normal form code:
orders are rebuilt from words by transitive closure and formulas are
evaluated straight from their definitions.
"""

from __future__ import annotations

import itertools

from tracecascade.loctl import And, Const, ExistsMax, Letter, Letters, Not, Or, Prev, Since, Yleq


def locs(alphabet):
    return {a: frozenset(alphabet.loc(a)) for a in alphabet.letters}


def swap_class(alphabet, word) -> frozenset:
    """All words reachable by swapping adjacent letters with disjoint locations."""
    loc = locs(alphabet)
    word = tuple(word)
    seen = {word}
    todo = [word]
    while todo:
        w = todo.pop()
        for k in range(len(w) - 1):
            if not loc[w[k]] & loc[w[k + 1]]:
                v = w[:k] + (w[k + 1], w[k]) + w[k + 2:]
                if v not in seen:
                    seen.add(v)
                    todo.append(v)
    return frozenset(seen)


def all_words(alphabet, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(alphabet.letters, repeat=n)


def trace_classes(alphabet, max_len) -> set:
    return {swap_class(alphabet, w) for w in all_words(alphabet, max_len)}


def order(alphabet, word):
    """``below[e][f]`` iff ``e <= f`` in the labelled poset of ``word``."""
    loc = locs(alphabet)
    n = len(word)
    below = [[e == f or (e < f and bool(loc[word[e]] & loc[word[f]])) for f in range(n)] for e in range(n)]
    for k in range(n):
        for e in range(n):
            if below[e][k]:
                for f in range(n):
                    if below[k][f]:
                        below[e][f] = True
    return below


def chain_events(alphabet, word, i):
    return [e for e, a in enumerate(word) if i in alphabet.loc(a)]


def primary(alphabet, word, below, e, i):
    """Latest ``i``-event strictly below ``e``."""
    cands = [f for f in chain_events(alphabet, word, i) if f != e and below[f][e]]
    return max(cands) if cands else None


def theta(alphabet, word):
    """Primary order matrices of all events."""
    below = order(alphabet, word)
    n = alphabet.n
    out = []
    for e in range(len(word)):
        prim = [primary(alphabet, word, below, e, i) for i in range(n)]
        out.append(tuple(
            tuple(int(prim[i] is not None and prim[j] is not None and below[prim[i]][prim[j]]) for j in range(n))
            for i in range(n)
        ))
    return out


def view(alphabet, word, i):
    """Letters of the down-closure of the last ``i``-event, in word order."""
    below = order(alphabet, word)
    chain = chain_events(alphabet, word, i)
    if not chain:
        return ()
    top = chain[-1]
    return tuple(a for e, a in enumerate(word) if below[e][top])


def strict_past_word(alphabet, word, e):
    below = order(alphabet, word)
    return tuple(a for f, a in enumerate(word) if f != e and below[f][e])


def holds(alphabet, word, e, f, below=None):
    """Event formula ``f`` at event ``e`` of ``word``, from the definitions."""
    below = order(alphabet, word) if below is None else below
    if isinstance(f, Letter):
        return word[e] == f.name
    if isinstance(f, Letters):
        return word[e] in f.members
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return not holds(alphabet, word, e, f.arg, below)
    if isinstance(f, Or):
        return holds(alphabet, word, e, f.left, below) or holds(alphabet, word, e, f.right, below)
    if isinstance(f, And):
        return holds(alphabet, word, e, f.left, below) and holds(alphabet, word, e, f.right, below)
    if isinstance(f, Yleq):
        a = primary(alphabet, word, below, e, f.i)
        b = primary(alphabet, word, below, e, f.j)
        return a is not None and b is not None and below[a][b]
    if isinstance(f, Prev):
        a = primary(alphabet, word, below, e, f.i)
        return a is not None and holds(alphabet, word, a, f.arg, below)
    if isinstance(f, Since):
        if f.i not in alphabet.loc(word[e]):
            return False
        chain = [g for g in chain_events(alphabet, word, f.i) if g < e]
        for k, g in enumerate(chain):
            if holds(alphabet, word, g, f.witness, below) and all(
                holds(alphabet, word, h, f.hold, below) for h in chain[k + 1:]
            ):
                return True
        return False
    raise TypeError(f)


def satisfies(alphabet, word, f) -> bool:
    """Trace formula ``f`` on ``word``."""
    if isinstance(f, ExistsMax):
        chain = chain_events(alphabet, word, f.i)
        return bool(chain) and holds(alphabet, word, chain[-1], f.arg)
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return not satisfies(alphabet, word, f.arg)
    if isinstance(f, Or):
        return satisfies(alphabet, word, f.left) or satisfies(alphabet, word, f.right)
    if isinstance(f, And):
        return satisfies(alphabet, word, f.left) and satisfies(alphabet, word, f.right)
    raise TypeError(f)


def run_word(A, word):
    """Global state after ``word``, stepping the local transition by hand."""
    s = list(A.initial)
    for a in word:
        procs = sorted(A.alphabet.loc(a))
        new = A.local_step(a, tuple(s[i] for i in procs))
        for i, v in zip(procs, new):
            s[i] = v
    return tuple(s)
