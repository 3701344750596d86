"""Transformation monoids, asynchronous transformation monoids and trace morphisms.

A transformation of a carrier with ``n`` points is a tuple ``t`` of length ``n``
with ``t[x]`` the image of point ``x``. Products read left to right: ``f * g``
applies ``f`` first, so ``compose(f, g)[x] == g[f[x]]``.
"""

from __future__ import annotations

import itertools
from collections import deque
from collections.abc import Callable, Hashable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

from .errors import AlphabetMismatch, CommutationViolation, SearchBudgetExceeded
from .traces import Alphabet, DecoratedAlphabet, Trace

Transformation = tuple


def identity(n: int) -> Transformation:
    return tuple(range(n))


def constant(n: int, value: int) -> Transformation:
    return (value,) * n


def compose(f: Transformation, g: Transformation) -> Transformation:
    """Apply ``f`` then ``g``."""
    return tuple(g[x] for x in f)


def is_bijective(f: Transformation) -> bool:
    return len(set(f)) == len(f)


@dataclass(frozen=True)
class TransformationMonoid:
    """A carrier with the monoid generated by some transformations of it."""

    carrier: tuple
    elements: tuple
    generators: tuple

    @cached_property
    def element_set(self) -> frozenset:
        return frozenset(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, f):
        return f in self.element_set

    @property
    def identity(self) -> Transformation:
        return identity(len(self.carrier))

    def name(self, f: Transformation) -> str:
        return "[" + " ".join(str(self.carrier[y]) for y in f) + "]"


def close_generators(carrier: Sequence, gens: Iterable[Transformation]) -> TransformationMonoid:
    """Breadth-first closure of ``gens`` under right multiplication, identity first."""
    carrier = tuple(carrier)
    gens = tuple(dict.fromkeys(tuple(g) for g in gens))
    for g in gens:
        if len(g) != len(carrier) or any(not 0 <= y < len(carrier) for y in g):
            raise ValueError("generator does not act on the carrier")
    ident = identity(len(carrier))
    seen = {ident: None}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = compose(x, g)
            if y not in seen:
                seen[y] = None
                queue.append(y)
    return TransformationMonoid(carrier, tuple(seen), gens)


def power(f: Transformation, k: int) -> Transformation:
    result = identity(len(f))
    base = f
    while k:
        if k & 1:
            result = compose(result, base)
        base = compose(base, base)
        k >>= 1
    return result


def is_aperiodic(m: TransformationMonoid) -> bool:
    """True iff no element has a nontrivial cyclic part among its powers."""
    for x in m.elements:
        seen = set()
        cur = x
        while cur not in seen:
            seen.add(cur)
            nxt = compose(cur, x)
            if nxt == cur:
                break
            cur = nxt
        else:
            return False
    return True


class GlobalSpace:
    """The product of local state sets, enumerated in lexicographic order."""

    def __init__(self, local_states: Sequence[Sequence]):
        self.local_states = tuple(tuple(s) for s in local_states)
        self.states = tuple(itertools.product(*self.local_states))
        self.index = {s: k for k, s in enumerate(self.states)}

    def __len__(self):
        return len(self.states)

    def project(self, s: tuple, procs: Iterable[int]) -> tuple:
        return tuple(s[i] for i in sorted(procs))

    def sub_states(self, procs: Iterable[int]) -> tuple:
        return tuple(itertools.product(*(self.local_states[i] for i in sorted(procs))))


@dataclass(frozen=True, eq=False)
class Atm:
    """An asynchronous transformation monoid: a monoid acting on a product of local state sets."""

    local_states: tuple
    monoid: TransformationMonoid

    @classmethod
    def generate(cls, local_states: Sequence[Sequence], gens: Iterable[Transformation]) -> "Atm":
        space = GlobalSpace(local_states)
        return cls(space.local_states, close_generators(space.states, gens))

    @cached_property
    def space(self) -> GlobalSpace:
        return GlobalSpace(self.local_states)

    @property
    def processes(self) -> range:
        return range(len(self.local_states))

    def __len__(self):
        return len(self.monoid)


def is_p_map(h: Transformation, procs: Iterable[int], atm: Atm) -> bool:
    procs = frozenset(procs)
    space = atm.space
    rest = [i for i in range(len(space.local_states)) if i not in procs]
    seen: dict = {}
    for k, s in enumerate(space.states):
        t = space.states[h[k]]
        if any(t[i] != s[i] for i in rest):
            return False
        key = space.project(s, procs)
        val = space.project(t, procs)
        if seen.setdefault(key, val) != val:
            return False
    return True


def extend_p_map(f: Transformation, procs: Iterable[int], atm: Atm) -> Transformation:
    """The unique ``procs``-map acting as ``f`` on the product of the local sets in ``procs``."""
    order = sorted(procs)
    space = atm.space
    sub = space.sub_states(order)
    sub_index = {s: k for k, s in enumerate(sub)}
    if len(f) != len(sub):
        raise ValueError("f does not act on S_P")
    table = []
    for s in space.states:
        new = list(s)
        for i, v in zip(order, sub[f[sub_index[space.project(s, order)]]]):
            new[i] = v
        table.append(space.index[tuple(new)])
    return tuple(table)


def restrict_p_map(h: Transformation, procs: Iterable[int], atm: Atm) -> Transformation:
    """The action of a ``procs``-map on the product of the local sets in ``procs``."""
    order = sorted(procs)
    space = atm.space
    sub = space.sub_states(order)
    sub_index = {s: k for k, s in enumerate(sub)}
    out = [0] * len(sub)
    for k, s in enumerate(space.states):
        out[sub_index[space.project(s, order)]] = sub_index[space.project(space.states[h[k]], order)]
    return tuple(out)


def local_alphabet(alphabet: Alphabet, local_states: Sequence[Sequence], signature: Hashable | None = None):
    """The alphabet of letters ``(a, s_a)`` with ``s_a`` ranging over the ``loc(a)`` states."""
    local_states = tuple(tuple(s) for s in local_states)
    sig = local_states if signature is None else signature

    def decorations(a):
        return itertools.product(*(local_states[i] for i in sorted(alphabet.loc(a))))

    return DecoratedAlphabet(alphabet, ("local", sig), decorations)


def carrier_alphabet(alphabet: Alphabet, size: int):
    """The alphabet of letters ``(a, x)`` with ``x`` a carrier point index."""
    return DecoratedAlphabet(alphabet, ("carrier", size), lambda a: range(size))


@dataclass(frozen=True, eq=False)
class TraceMorphism:
    """Letter images in the transformations of a finite carrier.

    ``target`` is an :class:`Atm` for asynchronous morphisms and ``None`` for
    morphisms into a plain transformation monoid on ``carrier``.
    """

    alphabet: Alphabet
    images: Mapping
    carrier: tuple
    target: Atm | None = None
    wreath: Mapping | None = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return len(self.carrier)

    def image(self, a) -> Transformation:
        return self.images[a]

    def of_word(self, word: Iterable) -> Transformation:
        result = identity(self.size)
        for a in word:
            result = compose(result, self.images[a])
        return result

    def __call__(self, t: Trace | Sequence) -> Transformation:
        return self.of_word(t.word if isinstance(t, Trace) else t)

    def trajectory(self, x: int, word: Iterable) -> list[int]:
        """States visited when running the images of ``word`` from ``x``."""
        out = [x]
        for a in word:
            x = self.images[a][x]
            out.append(x)
        return out

    @cached_property
    def monoid(self) -> TransformationMonoid:
        return close_generators(self.carrier, [self.images[a] for a in self.alphabet.letters])

    def commutation_failures(self) -> list[tuple]:
        letters = self.alphabet.letters
        bad = []
        for a, b in itertools.combinations(letters, 2):
            if self.alphabet.independent(a, b):
                fa, fb = self.images[a], self.images[b]
                if compose(fa, fb) != compose(fb, fa):
                    bad.append((a, b))
        return bad

    def is_trace_morphism(self) -> bool:
        return not self.commutation_failures()

    def is_asynchronous(self) -> bool:
        if self.target is None:
            return False
        return all(is_p_map(self.images[a], self.alphabet.loc(a), self.target) for a in self.alphabet.letters)


def morphism(alphabet: Alphabet, images: Mapping, carrier: Sequence) -> TraceMorphism:
    carrier = tuple(carrier)
    imgs = {a: tuple(images[a]) for a in alphabet.letters}
    return TraceMorphism(alphabet, imgs, carrier)


def async_morphism(alphabet: Alphabet, images: Mapping, atm: Atm) -> TraceMorphism:
    imgs = {a: tuple(images[a]) for a in alphabet.letters}
    return TraceMorphism(alphabet, imgs, atm.space.states, atm)


def _same_source(phi: TraceMorphism, psi: TraceMorphism) -> None:
    if phi.alphabet != psi.alphabet:
        raise AlphabetMismatch("morphisms have different source alphabets")


def check_simulation(phi: TraceMorphism, psi: TraceMorphism, f: Sequence[int]) -> bool:
    """True iff ``f`` maps onto the carrier of ``phi`` and intertwines the two actions."""
    _same_source(phi, psi)
    f = tuple(f)
    if len(f) != psi.size or set(f) != set(range(phi.size)):
        return False
    for a in phi.alphabet.letters:
        pa, qa = phi.images[a], psi.images[a]
        if any(f[qa[y]] != pa[f[y]] for y in range(psi.size)):
            return False
    return True


DIVISION_MAX_CARRIER = 8
DIVISION_MAX_MONOID = 64


def division_witness(t1: TransformationMonoid, t2: TransformationMonoid):
    """Search for a surjection ``f`` witnessing that ``t1`` divides ``t2``.

    Returns ``f`` or ``None``. Given ``f``, the elements of ``t2`` compatible
    with its kernel form a submonoid with an induced morphism onto a monoid of
    transformations of the smaller carrier; ``t1`` divides via ``f`` exactly
    when its elements all lie in that image.
    """
    nx, ny = len(t1.carrier), len(t2.carrier)
    if ny > DIVISION_MAX_CARRIER or len(t2) > DIVISION_MAX_MONOID:
        raise SearchBudgetExceeded(
            f"division search limited to |Y| <= {DIVISION_MAX_CARRIER}, |N| <= {DIVISION_MAX_MONOID}"
        )
    if nx > ny:
        return None
    wanted = t1.element_set
    for f in itertools.product(range(nx), repeat=ny):
        if len(set(f)) != nx:
            continue
        rep = [f.index(x) for x in range(nx)]
        image = set()
        for n in t2.elements:
            if all(f[n[y]] == f[n[rep[f[y]]]] for y in range(ny)):
                image.add(tuple(f[n[rep[x]]] for x in range(nx)))
        if wanted <= image:
            return f
    return None


def check_division(t1: TransformationMonoid, t2: TransformationMonoid) -> bool:
    return division_witness(t1, t2) is not None


@dataclass(frozen=True)
class WreathElement:
    """A pair ``(m, f)`` acting on ``X x Y`` by ``(x, y) -> (m(x), f(x)(y))``."""

    first: Transformation
    second: tuple

    def act(self, x: int, y: int) -> tuple[int, int]:
        return self.first[x], self.second[x][y]

    def __mul__(self, other: "WreathElement") -> "WreathElement":
        m = compose(self.first, other.first)
        f = tuple(compose(self.second[x], other.second[self.first[x]]) for x in range(len(self.first)))
        return WreathElement(m, f)

    def table(self) -> Transformation:
        """The action on pairs indexed ``x * |Y| + y``."""
        ny = len(self.second[0]) if self.second else 0
        return tuple(self.first[x] * ny + self.second[x][y] for x in range(len(self.first)) for y in range(ny))


def wreath_morphism_checked(phi: TraceMorphism, psi: TraceMorphism) -> TraceMorphism:
    """Combine ``phi`` and ``psi`` over ``Σ×X`` into a trace morphism into the wreath product.

    Raises :class:`CommutationViolation` when for some independent ``a, b`` and
    point ``x`` the second factor sees ``b`` differently before and after ``a``.
    """
    sigma = phi.alphabet
    nx = phi.size
    if psi.alphabet != carrier_alphabet(sigma, nx):
        raise AlphabetMismatch("second morphism must read letters decorated with the first carrier")
    for a in sigma.letters:
        for b in sigma.letters:
            if a != b and sigma.independent(a, b):
                fa = phi.images[a]
                for x in range(nx):
                    if psi.images[(b, fa[x])] != psi.images[(b, x)]:
                        raise CommutationViolation(a, b, phi.carrier[x])
    ny = psi.size
    elements = {}
    images = {}
    for a in sigma.letters:
        w = WreathElement(phi.images[a], tuple(psi.images[(a, x)] for x in range(nx)))
        elements[a] = w
        images[a] = w.table()
    carrier = tuple((x, y) for x in phi.carrier for y in psi.carrier)
    assert ny * nx == len(carrier)
    return TraceMorphism(sigma, images, carrier, None, elements)


def wreath_atm_states(t1: Atm, t2: Atm) -> tuple:
    return tuple(tuple(itertools.product(s, q)) for s, q in zip(t1.local_states, t2.local_states))


def asynchronous_wreath_morphism(phi: TraceMorphism, psi: TraceMorphism) -> TraceMorphism:
    """The asynchronous morphism ``a -> (phi(a), s -> psi(a, s_a))`` into ``T ≀as T'``."""
    t1, t2 = phi.target, psi.target
    if t1 is None or t2 is None:
        raise AlphabetMismatch("both morphisms must target asynchronous transformation monoids")
    sigma = phi.alphabet
    if psi.alphabet != local_alphabet(sigma, t1.local_states):
        raise AlphabetMismatch("second morphism must read Σ×ℓS of the first target")
    s_space, q_space = t1.space, t2.space
    pair_states = wreath_atm_states(t1, t2)
    pair_space = GlobalSpace(pair_states)
    images, elements = {}, {}
    for a in sigma.letters:
        loc = sorted(sigma.loc(a))
        second = tuple(psi.images[(a, s_space.project(s, loc))] for s in s_space.states)
        w = WreathElement(phi.images[a], second)
        elements[a] = w
        table = []
        for g in pair_space.states:
            s = tuple(p[0] for p in g)
            q = tuple(p[1] for p in g)
            x, y = w.act(s_space.index[s], q_space.index[q])
            s2, q2 = s_space.states[x], q_space.states[y]
            table.append(pair_space.index[tuple(zip(s2, q2))])
        images[a] = tuple(table)
    target = Atm.generate(pair_states, images.values())
    result = TraceMorphism(sigma, images, pair_space.states, target, elements)
    for a in sigma.letters:
        loc = sigma.loc(a)
        assert is_p_map(images[a], loc, target), f"image of {a!r} is not an a-map"
        assert is_p_map(phi.images[a], loc, t1)
    return result


def pair_to_global(s: tuple, q: tuple) -> tuple:
    """Identify ``(s, q)`` with the per-process pairs ``((s_i, q_i))_i``."""
    return tuple(zip(s, q))


def make_transformation(carrier: Sequence, rule: Callable[[Hashable], Hashable]) -> Transformation:
    index = {x: k for k, x in enumerate(carrier)}
    return tuple(index[rule(x)] for x in carrier)
