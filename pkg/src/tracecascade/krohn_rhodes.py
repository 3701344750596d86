"""Communication graphs and the leaf-by-leaf asynchronous decomposition over acyclic architectures.

A morphism into a transformation monoid is split at a leaf process into a part
that only watches the leaf's private letters and a part over the decorated
alphabet. The first part is handed to a sequential base decomposer and
localized at the leaf; the second is restricted to the remaining processes and
decomposed recursively. The pieces are then joined by an asynchronous wreath
product together with a simulation map onto the original carrier.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import networkx as nx

from .errors import AlphabetMismatch, HypothesisViolation, NotAcyclic
from .monoids import (
    Atm,
    TraceMorphism,
    TransformationMonoid,
    async_morphism,
    asynchronous_wreath_morphism,
    carrier_alphabet,
    check_simulation,
    close_generators,
    compose,
    constant,
    extend_p_map,
    identity,
    is_bijective,
    local_alphabet,
    morphism,
    wreath_morphism_checked,
)
from .traces import Alphabet, DistributedAlphabet

Transformation = tuple


def communication_graph(alphabet: Alphabet) -> nx.Graph:
    """Processes as vertices, an edge whenever two processes share a letter."""
    g = nx.Graph()
    g.add_nodes_from(range(alphabet.n))
    for a in alphabet.letters:
        g.add_edges_from(itertools.combinations(sorted(alphabet.loc(a)), 2))
    return g


def is_acyclic(alphabet: Alphabet) -> bool:
    acyclic = nx.is_forest(communication_graph(alphabet))
    if acyclic:
        assert all(len(alphabet.loc(a)) <= 2 for a in alphabet.letters)
    return acyclic


def leaf_and_neighbour(alphabet: Alphabet) -> tuple[int, int]:
    """Lowest-index process of degree at most one, and its neighbour (or the lowest other process)."""
    g = communication_graph(alphabet)
    for v in range(alphabet.n):
        if g.degree[v] <= 1:
            nbrs = list(g.neighbors(v))
            other = nbrs[0] if nbrs else min(u for u in range(alphabet.n) if u != v)
            return v, other
    raise NotAcyclic("communication graph has no leaf")


@dataclass
class SplitResult:
    """``phi1`` into ``(N, N̄)``, ``phi2`` over ``Σ×N`` and ``f(n, x) = n(x)`` indexed ``n*|X| + x``."""

    phi1: TraceMorphism
    phi2: TraceMorphism
    f: tuple
    private: tuple
    elements: tuple

    @property
    def wreath(self) -> TraceMorphism:
        return wreath_morphism_checked(self.phi1, self.phi2)


def split(phi: TraceMorphism, p: int) -> SplitResult:
    """Separate the letters private to ``p`` from everything else."""
    sigma = phi.alphabet
    nx_ = phi.size
    private = tuple(a for a in sigma.letters if sigma.loc(a) == frozenset({p}))
    shared = frozenset(a for a in sigma.sigma(p) if a not in private)
    N = close_generators(phi.carrier, [phi.images[a] for a in private]).elements
    index = {n: k for k, n in enumerate(N)}
    size = len(N)
    images1 = {}
    for a in sigma.letters:
        if a in private:
            images1[a] = tuple(index[compose(n, phi.images[a])] for n in N)
        elif a in shared:
            images1[a] = constant(size, index[identity(nx_)])
        else:
            images1[a] = identity(size)
    phi1 = morphism(sigma, images1, N)
    images2 = {}
    for a in sigma.letters:
        for k, n in enumerate(N):
            if a in private:
                images2[(a, k)] = identity(nx_)
            elif a in shared:
                images2[(a, k)] = compose(n, phi.images[a])
            else:
                images2[(a, k)] = phi.images[a]
    phi2 = morphism(carrier_alphabet(sigma, size), images2, phi.carrier)
    f = tuple(n[x] for n in N for x in range(nx_))
    return SplitResult(phi1, phi2, f, private, N)


def split_equation_failures(phi: TraceMorphism, s: SplitResult) -> list:
    """Triples ``(a, n, x)`` where ``f(η(a)(n, x)) != φ(a)(f(n, x))``; empty when the split is sound."""
    nx_ = phi.size
    bad = []
    for a in phi.alphabet.letters:
        for k, n in enumerate(s.elements):
            for x in range(nx_):
                k2 = s.phi1.images[a][k]
                x2 = s.phi2.images[(a, k)][x]
                if s.f[k2 * nx_ + x2] != phi.images[a][s.f[k * nx_ + x]]:
                    bad.append((a, k, x))
    return bad


@dataclass(frozen=True)
class LocalizedFactor:
    """A transformation monoid placed at one process: ``kind`` is U2, group, trivial or tm."""

    kind: str
    process: int
    states: int
    size: int
    non_prime: bool

    def describe(self, alphabet: Alphabet | None = None) -> str:
        proc = alphabet.processes[self.process] if alphabet is not None else str(self.process + 1)
        flag = " non-prime" if self.non_prime else ""
        return f"{self.kind}[{proc}] states={self.states} monoid={self.size}{flag}"


def _classify(m: TransformationMonoid) -> tuple[str, bool]:
    size = len(m)
    if size == 1:
        return "trivial", False
    if len(m.carrier) == 2 and all(e == identity(2) or len(set(e)) == 1 for e in m.elements):
        return "U2", False
    if all(is_bijective(e) for e in m.elements):
        prime = size > 1 and all(size % d for d in range(2, int(size ** 0.5) + 1))
        return "group", not prime
    return "tm", True


@dataclass
class BaseResult:
    """A sequential decomposition localized at one process."""

    factors: list
    states: tuple
    images: dict
    f: tuple


BaseDecomposer = Callable[[TraceMorphism, int], BaseResult]


def base_passthrough(phi: TraceMorphism, p: int) -> BaseResult:
    """Keep the monoid as a single factor at ``p`` with the identity simulation map."""
    m = phi.monoid
    kind, non_prime = _classify(m)
    factor = LocalizedFactor(kind, p, len(phi.carrier), len(m), non_prime)
    return BaseResult([factor], tuple(range(phi.size)), dict(phi.images), identity(phi.size))


def localize(base: BaseResult, sigma: Alphabet, p: int) -> tuple[TraceMorphism, tuple]:
    """``T[p]``: the base result as an asynchronous morphism over ``sigma`` plus its map to the carrier."""
    states = [base.states if i == p else ("_",) for i in range(sigma.n)]
    frame = Atm.generate(states, [])
    images = {}
    for a in sigma.letters:
        local = base.images.get(a)
        if local is None or p not in sigma.loc(a):
            images[a] = identity(len(frame.space))
        else:
            images[a] = extend_p_map(local, [p], frame)
    atm = Atm.generate(states, images.values())
    psi = async_morphism(sigma, images, atm)
    f = tuple(base.f[base.states.index(s[p])] for s in atm.space.states)
    return psi, f


def join(
    phi1: TraceMorphism,
    phi2: TraceMorphism,
    psi1: TraceMorphism,
    f1: Sequence[int],
    psi2: TraceMorphism,
    f2: Sequence[int],
) -> tuple[TraceMorphism, TraceMorphism, tuple]:
    """Combine simulations of ``phi1`` and of ``phi2`` read through ``f1`` into one asynchronous morphism.

    Returns ``(φ1≀φ2, ψ1≀asψ2, f)`` with ``f`` mapping the global states of
    ``ψ1≀asψ2`` to the carrier of ``φ1≀φ2`` (pairs indexed ``x*|Y| + y``).
    """
    sigma = phi1.alphabet
    t1 = psi1.target
    check_join_hypothesis(phi2, psi1, f1)
    if psi2.alphabet != local_alphabet(sigma, t1.local_states):
        raise AlphabetMismatch("psi2 must read Σ×ℓS of the first target")
    wreath = wreath_morphism_checked(phi1, phi2)
    composite = asynchronous_wreath_morphism(psi1, psi2)
    s_index, q_index = t1.space.index, psi2.target.space.index
    ny = phi2.size
    f = []
    for g in composite.carrier:
        s = tuple(x[0] for x in g)
        q = tuple(x[1] for x in g)
        f.append(f1[s_index[s]] * ny + f2[q_index[q]])
    return wreath, composite, tuple(f)


def check_join_hypothesis(phi2: TraceMorphism, psi1: TraceMorphism, f1: Sequence[int]) -> None:
    """``s_a = s'_a`` must imply ``φ2(a, f1(s)) = φ2(a, f1(s'))``."""
    sigma = psi1.alphabet
    space = psi1.target.space
    for a in sigma.letters:
        loc = sorted(sigma.loc(a))
        seen: dict = {}
        for k, s in enumerate(space.states):
            key = space.project(s, loc)
            img = phi2.images[(a, f1[k])]
            if key in seen and phi2.images[(a, f1[seen[key]])] != img:
                raise HypothesisViolation(a, space.states[seen[key]], s)
            seen.setdefault(key, k)


def lifted_second(phi2: TraceMorphism, psi1: TraceMorphism, f1: Sequence[int]) -> TraceMorphism:
    """``φ2'(a, s_a) = φ2(a, f1(s))`` over ``Σ×ℓS``."""
    sigma = psi1.alphabet
    t1 = psi1.target
    images = {}
    for k, s in enumerate(t1.space.states):
        for a in sigma.letters:
            s_a = t1.space.project(s, sigma.loc(a))
            images.setdefault((a, s_a), phi2.images[(a, f1[k])])
    return morphism(local_alphabet(sigma, t1.local_states), images, phi2.carrier)


def drop_process(alphabet: Alphabet, lifted: TraceMorphism, p: int) -> tuple[DistributedAlphabet, TraceMorphism]:
    """Restrict a morphism over ``Σ×ℓS`` to the letters still seen by processes other than ``p``."""
    keep = [i for i in range(alphabet.n) if i != p]
    names = [alphabet.processes[i] for i in keep]
    locations = []
    for letter in lifted.alphabet.letters:
        where = sorted(lifted.alphabet.loc(letter) - {p})
        if where:
            locations.append((letter, [alphabet.processes[i] for i in where]))
    sub = DistributedAlphabet(names, locations)
    images = {letter: lifted.images[letter] for letter, _ in locations}
    return sub, morphism(sub, images, lifted.carrier)


def reinsert_process(sub_psi: TraceMorphism, alphabet: Alphabet, t1_states, p: int) -> TraceMorphism:
    """Extend a morphism over the reduced alphabet back to ``Σ×ℓS`` with a singleton state at ``p``.

    Inserting a one-point factor keeps the lexicographic order of global
    states, so transition tables carry over unchanged.
    """
    states = list(sub_psi.target.local_states)
    states.insert(p, ("_",))
    ident = identity(sub_psi.size)
    images = {}
    target_alphabet = local_alphabet(alphabet, t1_states)
    for letter in target_alphabet.letters:
        images[letter] = sub_psi.images.get(letter, ident)
    atm = Atm.generate(states, images.values())
    return async_morphism(target_alphabet, images, atm)


@dataclass
class Decomposition:
    """An asynchronous morphism simulating the input, with its localized factors."""

    source: TraceMorphism
    morphism: TraceMorphism
    sim_map: tuple
    factors: list = field(default_factory=list)
    order: list = field(default_factory=list)

    def verify(self) -> bool:
        return check_simulation(self.source, self.morphism, self.sim_map) and self.morphism.is_asynchronous()

    @property
    def full_form(self) -> bool:
        return not any(f.non_prime for f in self.factors)


def acyclic_decompose(phi: TraceMorphism, base: BaseDecomposer = base_passthrough) -> Decomposition:
    """Decompose ``phi`` into localized factors, eliminating one leaf process per round."""
    sigma = phi.alphabet
    if not is_acyclic(sigma):
        raise NotAcyclic("communication graph has a cycle")
    if sigma.n == 1:
        result = base(phi, 0)
        psi, f = localize(result, sigma, 0)
        return Decomposition(phi, psi, f, list(result.factors), [sigma.processes[0]])
    leaf, _ = leaf_and_neighbour(sigma)
    parts = split(phi, leaf)
    local_letters = sigma.sigma(leaf)
    leaf_alphabet = DistributedAlphabet([sigma.processes[leaf]], [(a, [sigma.processes[leaf]]) for a in local_letters])
    word_phi = morphism(leaf_alphabet, {a: parts.phi1.images[a] for a in local_letters}, parts.phi1.carrier)
    result = base(word_phi, leaf)
    factors = [LocalizedFactor(x.kind, leaf, x.states, x.size, x.non_prime) for x in result.factors]
    psi1, f1 = localize(result, sigma, leaf)
    check_join_hypothesis(parts.phi2, psi1, f1)
    lifted = lifted_second(parts.phi2, psi1, f1)
    sub_alphabet, sub_phi = drop_process(sigma, lifted, leaf)
    inner = acyclic_decompose(sub_phi, base)
    for x in inner.factors:
        factors.append(LocalizedFactor(x.kind, sigma.processes.index(sub_alphabet.processes[x.process]), x.states, x.size, x.non_prime))
    psi2 = reinsert_process(inner.morphism, sigma, psi1.target.local_states, leaf)
    _, composite, fj = join(parts.phi1, parts.phi2, psi1, f1, psi2, inner.sim_map)
    f = tuple(parts.f[k] for k in fj)
    return Decomposition(phi, composite, f, factors, [sigma.processes[leaf]] + inner.order)
