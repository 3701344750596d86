"""Distributed alphabets, traces in lexicographic normal form, and their posets."""

from __future__ import annotations

import heapq
from collections.abc import Callable, Hashable, Iterable, Iterator, Sequence
from functools import cached_property

from .errors import AlphabetError, AlphabetMismatch, UnknownEvent, UnknownLetter

Letter = Hashable


def orderable(value):
    """Map a nested state or decoration value to something totally ordered."""
    if value is None:
        return (0,)
    if isinstance(value, bool):
        return (1, int(value))
    if isinstance(value, int):
        return (1, value)
    if isinstance(value, str):
        return (2, value)
    if isinstance(value, tuple):
        return (3, tuple(orderable(v) for v in value))
    if isinstance(value, frozenset):
        return (4, tuple(sorted(orderable(v) for v in value)))
    return (5, repr(value))


class Alphabet:
    """Common interface of explicit and decorated distributed alphabets."""

    processes: tuple[str, ...]

    @property
    def n(self) -> int:
        return len(self.processes)

    def loc(self, letter) -> frozenset[int]:
        raise NotImplementedError

    def key(self, letter):
        raise NotImplementedError

    def __contains__(self, letter) -> bool:
        raise NotImplementedError

    @property
    def letters(self) -> tuple:
        raise NotImplementedError

    def dependent(self, a, b) -> bool:
        return not self.loc(a).isdisjoint(self.loc(b))

    def independent(self, a, b) -> bool:
        return self.loc(a).isdisjoint(self.loc(b))

    def sigma(self, i: int) -> tuple:
        """Letters whose location contains process ``i``."""
        return tuple(a for a in self.letters if i in self.loc(a))

    def process_index(self, ref) -> int:
        """Resolve a process given as 0-based int, declared name, or 1-based numeral string."""
        if isinstance(ref, int):
            if 0 <= ref < self.n:
                return ref
            raise AlphabetError(f"process index {ref} out of range")
        if ref in self.processes:
            return self.processes.index(ref)
        if isinstance(ref, str) and ref.isdigit() and 1 <= int(ref) <= self.n:
            return int(ref) - 1
        raise AlphabetError(f"unknown process {ref!r}")

    def check_letter(self, letter) -> None:
        if letter not in self:
            raise UnknownLetter(letter)

    @property
    def root(self) -> "DistributedAlphabet":
        return self  # type: ignore[return-value]


class DistributedAlphabet(Alphabet):
    """Finite letters with a nonempty location set each; letter order is declaration order."""

    def __init__(self, processes: Sequence[str], locations: Iterable[tuple[Letter, Iterable]]):
        self.processes = tuple(processes)
        if len(set(self.processes)) != len(self.processes):
            raise AlphabetError("duplicate process names")
        letters, loc = [], {}
        for letter, where in locations:
            if letter in loc:
                raise AlphabetError(f"duplicate letter {letter!r}")
            idx = frozenset(self.process_index(p) for p in where)
            if not idx:
                raise AlphabetError(f"letter {letter!r} has empty location")
            letters.append(letter)
            loc[letter] = idx
        self._letters = tuple(letters)
        self._loc = loc
        self._rank = {a: k for k, a in enumerate(self._letters)}
        for i, p in enumerate(self.processes):
            if not any(i in s for s in loc.values()):
                raise AlphabetError(f"process {p!r} has no letters")
        self._hash = hash((self.processes, self._letters, tuple(loc[a] for a in letters)))

    @classmethod
    def from_processes(cls, sigmas: dict[str, Iterable[Letter]]) -> "DistributedAlphabet":
        """Build from per-process letter sets; letter order is first appearance."""
        order: list = []
        where: dict = {}
        for p, letters in sigmas.items():
            for a in letters:
                if a not in where:
                    order.append(a)
                    where[a] = []
                where[a].append(p)
        return cls(list(sigmas), [(a, where[a]) for a in order])

    @property
    def letters(self) -> tuple:
        return self._letters

    def loc(self, letter) -> frozenset[int]:
        try:
            return self._loc[letter]
        except (KeyError, TypeError):
            raise UnknownLetter(letter) from None

    def key(self, letter):
        return self._rank[letter]

    def __contains__(self, letter) -> bool:
        try:
            return letter in self._loc
        except TypeError:
            return False

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, DistributedAlphabet)
            and self._hash == other._hash
            and self.processes == other.processes
            and self._letters == other._letters
            and self._loc == other._loc
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        parts = ", ".join(
            f"{a}@{{{','.join(self.processes[i] for i in sorted(self._loc[a]))}}}" for a in self._letters
        )
        return f"DistributedAlphabet({parts})"


class DecoratedAlphabet(Alphabet):
    """Letters ``(a, d)`` over a base alphabet, located where ``a`` is.

    ``kind`` names the decoration family (for example the local states of some
    automaton) and takes part in equality. ``decorations(a)`` enumerates the
    admissible decorations of ``a`` and is only called when the full letter set
    is requested.
    """

    def __init__(self, base: Alphabet, kind, decorations: Callable[[Letter], Iterable] | None = None):
        self.base = base
        self.kind = kind
        self.processes = base.processes
        self._decorations = decorations
        self._hash = hash(("decorated", base, kind))

    def loc(self, letter) -> frozenset[int]:
        try:
            a, _ = letter
        except (TypeError, ValueError):
            raise UnknownLetter(letter) from None
        return self.base.loc(a)

    def key(self, letter):
        return (self.base.key(letter[0]), orderable(letter[1]))

    def __contains__(self, letter) -> bool:
        return isinstance(letter, tuple) and len(letter) == 2 and letter[0] in self.base

    @cached_property
    def letters(self) -> tuple:
        if self._decorations is None:
            raise AlphabetError("decorated alphabet has no finite decoration set")
        out = []
        for a in self.base.letters:
            out.extend((a, d) for d in self._decorations(a))
        return tuple(out)

    def decorations(self, a) -> tuple:
        if self._decorations is None:
            raise AlphabetError("decorated alphabet has no finite decoration set")
        return tuple(self._decorations(a))

    @property
    def root(self) -> DistributedAlphabet:
        return self.base.root

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, DecoratedAlphabet)
            and self._hash == other._hash
            and self.kind == other.kind
            and self.base == other.base
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"DecoratedAlphabet({self.base!r}, {self.kind!r})"


def _normal_form(alphabet: Alphabet, word: Sequence) -> tuple:
    n = len(word)
    if n < 2:
        return tuple(word)
    locs = [alphabet.loc(a) for a in word]
    succs: list[list[int]] = [[] for _ in range(n)]
    indeg = [0] * n
    for k in range(n):
        for j in range(k):
            if not locs[j].isdisjoint(locs[k]):
                succs[j].append(k)
                indeg[k] += 1
    heap = [(alphabet.key(word[k]), k) for k in range(n) if indeg[k] == 0]
    heapq.heapify(heap)
    out = []
    while heap:
        _, k = heapq.heappop(heap)
        out.append(word[k])
        for m in succs[k]:
            indeg[m] -= 1
            if indeg[m] == 0:
                heapq.heappush(heap, (alphabet.key(word[m]), m))
    return tuple(out)


class Trace:
    """A trace stored as the least linearization of its class under the letter order."""

    __slots__ = ("alphabet", "word", "_poset", "_hash")

    def __init__(self, alphabet: Alphabet, word: tuple, *, _normal: bool = False):
        self.alphabet = alphabet
        self.word = tuple(word) if _normal else _normal_form(alphabet, tuple(word))
        self._poset = None
        self._hash = None

    def __len__(self):
        return len(self.word)

    def __iter__(self):
        return iter(self.word)

    def __eq__(self, other):
        return isinstance(other, Trace) and self.word == other.word and self.alphabet == other.alphabet

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.word)
        return self._hash

    def __str__(self):
        return " ".join(str(a) for a in self.word) if self.word else "ε"

    def __repr__(self):
        return f"Trace({self.word!r})"

    @property
    def poset(self) -> "TracePoset":
        if self._poset is None:
            self._poset = TracePoset(self.alphabet, self.word)
        return self._poset

    def restrict(self, events: Iterable[int]) -> "Trace":
        """The sub-trace induced by a downward closed set of event ids."""
        keep = sorted(events)
        return from_word(self.alphabet, [self.word[e] for e in keep])

    def past(self, e: int) -> "Trace":
        """The prefix induced by the strict past of event ``e``."""
        return self.restrict(strict_past(self.poset, e))


class TracePoset:
    """Events are positions in the canonical word; ``below[e]`` is a bitmask of the strict past."""

    def __init__(self, alphabet: Alphabet, word: Sequence):
        self.alphabet = alphabet
        self.events = tuple(enumerate(word))
        locs = [alphabet.loc(a) for a in word]
        below = []
        for k in range(len(word)):
            mask = 0
            for j in range(k):
                if not locs[j].isdisjoint(locs[k]):
                    mask |= below[j] | (1 << j)
            below.append(mask)
        self.below = tuple(below)
        self.locs = tuple(locs)
        self.chains = tuple(
            tuple(e for e in range(len(word)) if i in locs[e]) for i in range(alphabet.n)
        )

    def __len__(self):
        return len(self.events)

    def letter(self, e: int):
        return self.events[e][1]

    def _check(self, e):
        if not isinstance(e, int) or not 0 <= e < len(self.events):
            raise UnknownEvent(e)

    def leq(self, e: int, f: int) -> bool:
        return e == f or bool(self.below[f] >> e & 1)

    def lt(self, e: int, f: int) -> bool:
        return bool(self.below[f] >> e & 1)

    def last(self, i: int) -> int | None:
        chain = self.chains[i]
        return chain[-1] if chain else None


def from_word(alphabet: Alphabet, letters: Iterable) -> Trace:
    word = tuple(letters)
    for a in word:
        alphabet.check_letter(a)
    return Trace(alphabet, word)


def empty(alphabet: Alphabet) -> Trace:
    return Trace(alphabet, (), _normal=True)


def concat(t1: Trace, t2: Trace) -> Trace:
    if t1.alphabet != t2.alphabet:
        raise AlphabetMismatch("cannot concatenate traces over different alphabets")
    return Trace(t1.alphabet, t1.word + t2.word)


def poset(t: Trace) -> TracePoset:
    return t.poset


def strict_past(p: TracePoset, e: int) -> frozenset[int]:
    p._check(e)
    mask = p.below[e]
    return frozenset(k for k in range(e) if mask >> k & 1)


def down(p: TracePoset, e: int) -> frozenset[int]:
    return strict_past(p, e) | {e}


def i_view(t: Trace, i: int) -> Trace:
    p = t.poset
    last = p.last(i)
    if last is None:
        return empty(t.alphabet)
    return t.restrict(down(p, last))


def primary_event(p: TracePoset, e: int, i: int) -> int | None:
    p._check(e)
    mask = p.below[e]
    for f in reversed(p.chains[i]):
        if f < e and mask >> f & 1:
            return f
    return None


def linearizations(t: Trace) -> Iterator[tuple]:
    """Every word in the class of ``t`` (exponential; for small traces)."""
    p = t.poset
    n = len(t)
    full = (1 << n) - 1

    def rec(done, prefix):
        if done == full:
            yield tuple(prefix)
            return
        for e in range(n):
            if not done >> e & 1 and p.below[e] & ~done == 0:
                prefix.append(t.word[e])
                yield from rec(done | 1 << e, prefix)
                prefix.pop()

    yield from rec(0, [])


def enumerate_traces(alphabet: Alphabet, max_len: int) -> Iterator[Trace]:
    """Each trace of length at most ``max_len`` exactly once, by length then word order."""
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    level = [empty(alphabet)]
    letters = alphabet.letters
    for k in range(max_len + 1):
        yield from level
        if k == max_len:
            break
        seen = {}
        for t in level:
            for a in letters:
                nxt = Trace(alphabet, t.word + (a,))
                seen.setdefault(nxt.word, nxt)
        level = [seen[w] for w in sorted(seen, key=lambda w: tuple(alphabet.key(a) for a in w))]


def parse_alphabet(text: str) -> DistributedAlphabet:
    """Read the line format ``processes: p1 p2`` followed by ``letter a: p1 p2`` lines."""
    processes = None
    letters = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if not sep:
            raise AlphabetError(f"line {lineno}: expected ':'")
        head = head.split()
        if head == ["processes"]:
            processes = rest.split()
        elif len(head) == 2 and head[0] == "letter":
            letters.append((head[1], rest.split()))
        else:
            raise AlphabetError(f"line {lineno}: unrecognised entry {raw.strip()!r}")
    if not processes:
        raise AlphabetError("missing 'processes:' line")
    return DistributedAlphabet(processes, letters)


def format_alphabet(alphabet: DistributedAlphabet) -> str:
    lines = ["processes: " + " ".join(alphabet.processes)]
    for a in alphabet.letters:
        lines.append(f"letter {a}: " + " ".join(alphabet.processes[i] for i in sorted(alphabet.loc(a))))
    return "\n".join(lines) + "\n"
