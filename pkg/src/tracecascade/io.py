"""Plain-text file formats for alphabets, automata, cascade stages and morphisms.

Automaton files::

    alphabet: a3.alph          # path relative to this file; or inline processes/letter lines
    states p1: 1 2
    states p2: _
    states p3: _
    init: 1 _ _
    accept: 2 * *              # '*' matches any local state; several lines form a union
    trans a: (*)->(1)          # components in ascending process order within loc(a)
    trans b: (*,*)->(2,*)      # '*' on the right keeps the component

Stages of a cascade read decorated letters written ``a{x,y}``: the braces list
the local states of the earlier stages at ``loc(a)``, nested stage states
joined with dots (``p2.q1``). Stages of a global cascade sequence use one brace
group per earlier stage, each listing a full global state: ``a{1,_,_}{_,2,_}``.

Morphism files::

    alphabet: a1.alph
    carrier: 1 2
    map a: 1 1                 # image of each carrier point, in carrier order
"""

from __future__ import annotations

import re
from pathlib import Path

from .automata import AsynchronousAutomaton, global_alphabet_of, local_alphabet_of
from .cascade import unnest_letter
from .errors import InputError
from .monoids import morphism
from .traces import Alphabet, DistributedAlphabet, Trace, from_word, parse_alphabet

_TRANS = re.compile(r"^\s*\((?P<src>[^)]*)\)\s*->\s*\((?P<dst>[^)]*)\)\s*$")
_PATTERN = re.compile(r"^(?P<base>[^{}\s]+)(?P<groups>(\{[^{}]*\})*)$")


def format_state(x) -> str:
    """Flatten nested stage states into dot-joined text."""
    if isinstance(x, tuple):
        return ".".join(format_state(v) for v in x)
    return str(x)


def format_global(g) -> str:
    return "(" + ", ".join(format_state(x) for x in g) + ")"


def format_word(t: Trace) -> str:
    return " ".join(str(a) for a in t.word)


def read_text(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def load_alphabet(path) -> DistributedAlphabet:
    return parse_alphabet(read_text(path))


def parse_word(alphabet: Alphabet, text: str) -> Trace:
    """Whitespace-separated letter names; a single token of one-character letters may be run together."""
    tokens = text.split()
    if len(tokens) == 1 and tokens[0] not in alphabet and all(ch in alphabet for ch in tokens[0]):
        tokens = list(tokens[0])
    return from_word(alphabet, tokens)


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _split_alphabet(text: str, base_dir: Path):
    """Separate alphabet header or inline alphabet lines from the rest."""
    inline, rest, ref = [], [], None
    for lineno, line in _lines(text):
        head = line.partition(":")[0].split()
        if head == ["alphabet"]:
            ref = line.partition(":")[2].strip()
        elif head == ["processes"] or (head and head[0] == "letter"):
            inline.append(line)
        else:
            rest.append((lineno, line))
    alphabet = None
    if ref:
        alphabet = load_alphabet(base_dir / ref)
    elif inline:
        alphabet = parse_alphabet("\n".join(inline))
    return alphabet, rest


def _tokens(text: str) -> list[str]:
    return [tok.strip() for tok in text.split(",")] if text.strip() else []


class _Resolver:
    """Maps state text back to state values for one position of a pattern."""

    def __init__(self, states):
        self.by_text = {format_state(s): s for s in states}

    def __call__(self, tok: str, where: str):
        if tok == "*":
            return None
        try:
            return self.by_text[tok]
        except KeyError:
            raise InputError(f"{where}: unknown state {tok!r}") from None


def parse_automaton(text: str, alphabet: Alphabet | None = None, base_dir=".", context=None) -> AsynchronousAutomaton:
    """Read an automaton; ``context`` is ``("local", prefix)`` or ``("global", stages)`` for cascade stages."""
    base_dir = Path(base_dir)
    found, body = _split_alphabet(text, base_dir)
    if context is not None:
        sigma = context[1].alphabet if context[0] == "local" else context[1][0].alphabet
    else:
        sigma = alphabet if alphabet is not None else found
    if sigma is None:
        raise InputError("automaton file names no alphabet")
    n = sigma.n
    states: list = [None] * n
    init = None
    accept = []
    rules: dict = {}
    pending = []
    for lineno, line in body:
        head, sep, rest = line.partition(":")
        if not sep:
            raise InputError(f"line {lineno}: expected ':'")
        words = head.split()
        if words and words[0] == "states" and len(words) == 2:
            try:
                i = sigma.process_index(words[1])
            except Exception:
                raise InputError(f"line {lineno}: unknown process {words[1]!r}") from None
            states[i] = tuple(rest.split())
        elif words == ["init"]:
            init = rest.split()
        elif words == ["accept"]:
            accept.append(rest.split())
        elif words and words[0] == "trans" and len(words) == 2:
            pending.append((lineno, words[1], rest))
        else:
            raise InputError(f"line {lineno}: unrecognised entry {line!r}")
    for i, s in enumerate(states):
        if not s:
            raise InputError(f"missing 'states {sigma.root.processes[i]}:' line")
    if init is None or len(init) != n:
        raise InputError("'init:' must list one local state per process")
    for i, v in enumerate(init):
        if v not in states[i]:
            raise InputError(f"initial state {v!r} not in S_{sigma.root.processes[i]}")
    for lineno, pattern, rest in pending:
        where = f"line {lineno}"
        base, groups = _parse_pattern(pattern, where)
        if base not in sigma:
            raise InputError(f"{where}: unknown letter {base!r}")
        order = sorted(sigma.loc(base))
        groups = _resolve_groups(groups, base, order, context, where)
        m = _TRANS.match(rest)
        if not m:
            raise InputError(f"{where}: expected '(x,..)->(y,..)'")
        src, dst = _tokens(m.group("src")), _tokens(m.group("dst"))
        if len(src) != len(order) or len(dst) != len(order):
            raise InputError(f"{where}: {base!r} needs {len(order)} components")
        for pos, i in enumerate(order):
            for tok in (src[pos], dst[pos]):
                if tok != "*" and tok not in states[i]:
                    raise InputError(f"{where}: state {tok!r} not in S_{sigma.root.processes[i]}")
        src = tuple(None if t == "*" else t for t in src)
        dst = tuple(None if t == "*" else t for t in dst)
        rules.setdefault(base, []).append((groups, src, dst))
    return _build(sigma, states, init, accept, rules, context)


def _parse_pattern(pattern: str, where: str):
    m = _PATTERN.match(pattern)
    if not m:
        raise InputError(f"{where}: bad letter pattern {pattern!r}")
    groups = re.findall(r"\{([^{}]*)\}", m.group("groups"))
    return m.group("base"), [_tokens(g) for g in groups]


def _resolve_groups(groups, base, order, context, where):
    if context is None:
        if groups:
            raise InputError(f"{where}: decorations need a cascade context")
        return ()
    kind, ref = context
    if kind == "local":
        if len(groups) != 1 or len(groups[0]) != len(order):
            raise InputError(f"{where}: expected one decoration group with {len(order)} states")
        return (tuple(_Resolver(ref.local_states[i])(tok, where) for i, tok in zip(order, groups[0])),)
    if len(groups) != len(ref):
        raise InputError(f"{where}: expected {len(ref)} decoration groups")
    out = []
    for stage, group in zip(ref, groups):
        if len(group) != len(stage.local_states):
            raise InputError(f"{where}: a global state lists one state per process")
        out.append(tuple(_Resolver(s)(tok, where) for s, tok in zip(stage.local_states, group)))
    return tuple(out)


def _matches(pattern, value) -> bool:
    return all(p is None or p == v for p, v in zip(pattern, value))


def _build(sigma, states, init, accept, rules, context) -> AsynchronousAutomaton:
    if context is None:
        alphabet = sigma

        def split(letter):
            return letter, ()
    elif context[0] == "local":
        alphabet = local_alphabet_of(context[1])

        def split(letter):
            return letter[0], (letter[1],)
    else:
        alphabet = global_alphabet_of(context[1][-1])
        depth = len(context[1])

        def split(letter):
            a, gs = unnest_letter(letter, depth)
            return a, tuple(gs)

    def step(letter, q_a):
        a, decorations = split(letter)
        for groups, src, dst in rules.get(a, ()):
            if all(_matches(g, d) for g, d in zip(groups, decorations)) and _matches(src, q_a):
                return tuple(q if d is None else d for q, d in zip(q_a, dst))
        return q_a

    accepting = None
    if accept:
        patterns = [tuple(None if t == "*" else t for t in row) for row in accept]
        for row in patterns:
            if len(row) != sigma.n:
                raise InputError("'accept:' must list one local state per process")

        def accepting(g):
            return any(_matches(row, g) for row in patterns)

    return AsynchronousAutomaton(alphabet, states, step, init, accepting, signature=("file", id(rules)))


def load_automaton(path, alphabet: Alphabet | None = None, context=None) -> AsynchronousAutomaton:
    return parse_automaton(read_text(path), alphabet, Path(path).parent, context)


def parse_morphism(text: str, alphabet: Alphabet | None = None, base_dir="."):
    found, body = _split_alphabet(text, Path(base_dir))
    sigma = alphabet if alphabet is not None else found
    if sigma is None:
        raise InputError("morphism file names no alphabet")
    carrier = None
    images = {}
    for lineno, line in body:
        head, sep, rest = line.partition(":")
        words = head.split()
        if words == ["carrier"]:
            carrier = tuple(rest.split())
        elif len(words) == 2 and words[0] == "map":
            if carrier is None:
                raise InputError(f"line {lineno}: 'carrier:' must come first")
            targets = rest.split()
            if len(targets) != len(carrier) or any(x not in carrier for x in targets):
                raise InputError(f"line {lineno}: image must list a carrier point for each point")
            if words[1] not in sigma:
                raise InputError(f"line {lineno}: unknown letter {words[1]!r}")
            images[words[1]] = tuple(carrier.index(x) for x in targets)
        else:
            raise InputError(f"line {lineno}: unrecognised entry {line!r}")
    if carrier is None:
        raise InputError("missing 'carrier:' line")
    ident = tuple(range(len(carrier)))
    return morphism(sigma, {a: images.get(a, ident) for a in sigma.letters}, carrier)


def load_morphism(path, alphabet: Alphabet | None = None):
    return parse_morphism(read_text(path), alphabet, Path(path).parent)


def automaton_dot(A: AsynchronousAutomaton, name: str = "automaton") -> str:
    """Reachable global states with one edge per letter that changes the state."""
    start = A.initial
    index = {start: 0}
    order = [start]
    edges = []
    k = 0
    while k < len(order):
        s = order[k]
        for a in A.alphabet.letters:
            t = A.step(s, a)
            if t not in index:
                index[t] = len(order)
                order.append(t)
            if t != s:
                edges.append((index[s], index[t], a))
        k += 1
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    for s in order:
        shape = "doublecircle" if A.accepting is not None and A.is_accepting(s) else "circle"
        lines.append(f'  s{index[s]} [label="{format_global(s)}", shape={shape}];')
    lines.append('  init [shape=point];')
    lines.append("  init -> s0;")
    merged: dict = {}
    for src, dst, a in edges:
        merged.setdefault((src, dst), []).append(str(a))
    for (src, dst), labels in sorted(merged.items()):
        lines.append(f'  s{src} -> s{dst} [label="{",".join(labels)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def poset_dot(t: Trace, name: str = "trace") -> str:
    """Hasse diagram of the trace with events labelled ``<idx>:<letter>``."""
    p = t.poset
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    for e, a in enumerate(t.word):
        lines.append(f'  e{e} [label="{e}:{a}"];')
    for f in range(len(t)):
        for e in range(len(t)):
            if p.lt(e, f) and not any(p.lt(e, g) and p.lt(g, f) for g in range(len(t))):
                lines.append(f"  e{e} -> e{f};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _letter_pattern(letter, context) -> str:
    if context is None:
        return str(letter)
    if context[0] == "local":
        a, s_a = letter
        return f"{a}{{{','.join(format_state(x) for x in s_a)}}}"
    a, gs = unnest_letter(letter, context[1])
    return str(a) + "".join("{" + ",".join(format_state(x) for x in g) + "}" for g in gs)


def format_automaton(A: AsynchronousAutomaton, alphabet_ref: str, context=None, accept_rows=()) -> str:
    """Write ``A`` as explicit transition rules; ``context`` is ``None``, ``("local",)`` or ``("global", depth)``.

    Only transitions that change some component are written, so the file stays
    small for resets over large decorated alphabets.
    """
    sigma = A.alphabet.root
    lines = [f"alphabet: {alphabet_ref}"]
    for i, states in enumerate(A.local_states):
        lines.append(f"states {sigma.processes[i]}: " + " ".join(format_state(s) for s in states))
    lines.append("init: " + " ".join(format_state(s) for s in A.initial))
    for row in accept_rows:
        lines.append("accept: " + " ".join(format_state(s) for s in row))
    for letter in A.alphabet.letters:
        pattern = _letter_pattern(letter, context)
        for src, dst in A.local_table(letter).items():
            if src != dst:
                lhs = ",".join(format_state(s) for s in src)
                rhs = ",".join(format_state(s) for s in dst)
                lines.append(f"trans {pattern}: ({lhs})->({rhs})")
    return "\n".join(lines) + "\n"
