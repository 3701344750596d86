"""Formula trees for local temporal logic over traces, with a parser and printer.

Process indices in trees are 0-based; the text syntax uses declared process
names or 1-based numbers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from ..errors import FormulaSyntaxError, UnknownLetter
from ..traces import Alphabet


class Formula:
    __slots__ = ()

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True, eq=True, repr=False)
class Letter(Formula):
    name: object

    def __repr__(self):
        return f"Letter({self.name!r})"


@dataclass(frozen=True, repr=False)
class Letters(Formula):
    """Holds at events whose letter belongs to ``members``; ``label`` is only used for printing."""

    members: frozenset
    label: str | None = None

    def __repr__(self):
        return f"Letters({self.label or sorted(map(repr, self.members))})"


@dataclass(frozen=True)
class Const(Formula):
    value: bool


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Yleq(Formula):
    """Both primary events for ``i`` and ``j`` exist and the first is below the second."""

    i: int
    j: int


@dataclass(frozen=True)
class Prev(Formula):
    """The primary ``i``-event exists and satisfies ``arg``."""

    i: int
    arg: Formula


@dataclass(frozen=True)
class Since(Formula):
    """``hold S_i witness``: strictly earlier ``i``-event satisfying ``witness``, ``hold`` in between."""

    i: int
    hold: Formula
    witness: Formula


@dataclass(frozen=True)
class ExistsMax(Formula):
    """The last ``i``-event exists and satisfies ``arg``."""

    i: int
    arg: Formula


TRUE = Const(True)
FALSE = Const(False)


def disjunction(parts) -> Formula:
    """Balanced disjunction; empty gives false."""
    parts = list(parts)
    if not parts:
        return FALSE
    while len(parts) > 1:
        parts = [Or(parts[k], parts[k + 1]) if k + 1 < len(parts) else parts[k] for k in range(0, len(parts), 2)]
    return parts[0]


def conjunction(parts) -> Formula:
    """Balanced conjunction; empty gives true."""
    parts = list(parts)
    if not parts:
        return TRUE
    while len(parts) > 1:
        parts = [And(parts[k], parts[k + 1]) if k + 1 < len(parts) else parts[k] for k in range(0, len(parts), 2)]
    return parts[0]


def implies(a: Formula, b: Formula) -> Formula:
    return Or(Not(a), b)


def yeq(i: int, j: int) -> Formula:
    return And(Yleq(i, j), Yleq(j, i))


def ylt(i: int, j: int) -> Formula:
    return And(Yleq(i, j), Not(Yleq(j, i)))


class Fragment(Enum):
    SINCE_ONLY = "since"
    WITH_YLEQ = "yleq"
    WITH_PREV = "prev"
    FULL = "full"


def children(f: Formula) -> tuple:
    if isinstance(f, (Not, Prev, ExistsMax)):
        return (f.arg,)
    if isinstance(f, (Or, And)):
        return (f.left, f.right)
    if isinstance(f, Since):
        return (f.hold, f.witness)
    return ()


def subformulas(f: Formula):
    """Every distinct node object, each once, children first."""
    seen = set()
    order = []
    stack = [(f, False)]
    while stack:
        node, done = stack.pop()
        if id(node) in seen:
            continue
        if done:
            seen.add(id(node))
            order.append(node)
        else:
            stack.append((node, True))
            stack.extend((c, False) for c in children(node))
    return order


def fragment_of(f: Formula) -> Fragment:
    has_yleq = has_prev = False
    for node in subformulas(f):
        has_yleq |= isinstance(node, Yleq)
        has_prev |= isinstance(node, Prev)
    if has_yleq and has_prev:
        return Fragment.FULL
    if has_yleq:
        return Fragment.WITH_YLEQ
    if has_prev:
        return Fragment.WITH_PREV
    return Fragment.SINCE_ONLY


def is_trace_formula(f: Formula) -> bool:
    """Trace formulas are boolean combinations of ``ExistsMax`` nodes and constants."""
    if isinstance(f, ExistsMax):
        return True
    if isinstance(f, Not):
        return is_trace_formula(f.arg)
    if isinstance(f, (Or, And)):
        return is_trace_formula(f.left) and is_trace_formula(f.right)
    if isinstance(f, Const):
        return True
    return False


def depth(f: Formula) -> int:
    """Nesting depth of temporal operators."""
    memo = {}
    for node in subformulas(f):
        below = max((memo[id(c)] for c in children(node)), default=0)
        memo[id(node)] = below + isinstance(node, (Since, Prev, ExistsMax))
    return memo[id(f)]


_TOKEN = re.compile(
    r"\s*(?:(?P<op>->|[!&|(),{}\[\]])|(?P<name>[A-Za-z_][A-Za-z0-9_']*|[0-9]+))"
)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos:].lstrip()[0]!r}", pos)
        start = m.start(m.lastindex)
        out.append((m.group(m.lastindex), start))
        pos = m.end()
    out.append(("<end>", len(text)))
    return out


class _Parser:
    def __init__(self, text, alphabet, macros):
        self.tokens = _tokenize(text)
        self.k = 0
        self.alphabet = alphabet
        self.macros = macros or {}

    def peek(self, ahead=0):
        return self.tokens[min(self.k + ahead, len(self.tokens) - 1)][0]

    def pos(self):
        return self.tokens[self.k][1]

    def take(self, expected=None):
        tok, pos = self.tokens[self.k]
        if expected is not None and tok != expected:
            raise FormulaSyntaxError(f"expected {expected!r}, found {tok!r}", pos)
        self.k += 1
        return tok

    def process(self):
        pos = self.pos()
        tok = self.take()
        if self.alphabet is None:
            if tok.isdigit() and int(tok) >= 1:
                return int(tok) - 1
            raise FormulaSyntaxError(f"process {tok!r} needs an alphabet to resolve", pos)
        try:
            if tok in self.alphabet.processes:
                return self.alphabet.processes.index(tok)
            if tok.isdigit() and 1 <= int(tok) <= self.alphabet.n:
                return int(tok) - 1
        except ValueError:
            pass
        raise FormulaSyntaxError(f"unknown process {tok!r}", pos)

    def bracket_process(self):
        self.take("[")
        p = self.process()
        self.take("]")
        return p

    def parse(self):
        f = self.implication()
        if self.peek() != "<end>":
            raise FormulaSyntaxError(f"unexpected {self.peek()!r}", self.pos())
        return f

    def implication(self):
        left = self.disjunction()
        if self.peek() == "->":
            self.take()
            return implies(left, self.implication())
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.peek() == "|":
            self.take()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.since()
        while self.peek() == "&":
            self.take()
            left = And(left, self.since())
        return left

    def since(self):
        left = self.unary()
        while self.peek() == "S" and self.peek(1) == "[":
            self.take()
            i = self.bracket_process()
            left = Since(i, left, self.unary())
        return left

    def unary(self):
        tok = self.peek()
        if tok == "!":
            self.take()
            return Not(self.unary())
        if tok in ("Y", "E") and self.peek(1) == "[":
            self.take()
            i = self.bracket_process()
            arg = self.unary()
            return Prev(i, arg) if tok == "Y" else ExistsMax(i, arg)
        return self.atom()

    def letter(self, name, pos):
        if self.alphabet is not None and name not in self.alphabet:
            raise FormulaSyntaxError(str(UnknownLetter(name)), pos)
        return name

    def atom(self):
        pos = self.pos()
        tok = self.take()
        if tok == "(":
            f = self.implication()
            self.take(")")
            return f
        if tok == "true":
            return TRUE
        if tok == "false":
            return FALSE
        if tok == "Yleq" and self.peek() == "(":
            self.take("(")
            i = self.process()
            self.take(",")
            j = self.process()
            self.take(")")
            return Yleq(i, j)
        if tok == "{":
            names = []
            while self.peek() != "}":
                names.append(self.letter(self.take(), self.pos()))
                if self.peek() == ",":
                    self.take()
            self.take("}")
            return Letters(frozenset(names))
        if tok in self.macros:
            return Letters(frozenset(self.macros[tok]), tok)
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", tok):
            return Letter(self.letter(tok, pos))
        raise FormulaSyntaxError(f"unexpected {tok!r}", pos)


def parse(text: str, alphabet: Alphabet | None = None, macros: dict | None = None) -> Formula:
    """Parse the text syntax; ``macros`` maps names to letter sets."""
    return _Parser(text, alphabet, macros).parse()


def _proc(i: int, alphabet) -> str:
    return alphabet.processes[i] if alphabet is not None else str(i + 1)


def to_text(f: Formula, alphabet: Alphabet | None = None) -> str:
    """Fully parenthesized text that :func:`parse` reads back to an equal tree."""
    memo: dict = {}
    for node in subformulas(f):
        memo[id(node)] = _render(node, memo, alphabet)
    return memo[id(f)]


def _render(node, memo, alphabet):
    r = lambda c: memo[id(c)]  # noqa: E731
    if isinstance(node, Letter):
        return str(node.name)
    if isinstance(node, Letters):
        return node.label or "{" + ", ".join(sorted(map(str, node.members))) + "}"
    if isinstance(node, Const):
        return "true" if node.value else "false"
    if isinstance(node, Not):
        return f"!{r(node.arg)}"
    if isinstance(node, Or):
        return f"({r(node.left)} | {r(node.right)})"
    if isinstance(node, And):
        return f"({r(node.left)} & {r(node.right)})"
    if isinstance(node, Yleq):
        return f"Yleq({_proc(node.i, alphabet)},{_proc(node.j, alphabet)})"
    if isinstance(node, Prev):
        return f"Y[{_proc(node.i, alphabet)}] {r(node.arg)}"
    if isinstance(node, ExistsMax):
        return f"E[{_proc(node.i, alphabet)}] {r(node.arg)}"
    if isinstance(node, Since):
        return f"({r(node.hold)} S[{_proc(node.i, alphabet)}] {r(node.witness)})"
    raise TypeError(f"not a formula: {node!r}")


def letters_of(f: Formula) -> set:
    out = set()
    for node in subformulas(f):
        if isinstance(node, Letter):
            out.add(node.name)
        elif isinstance(node, Letters):
            out |= node.members
    return out
