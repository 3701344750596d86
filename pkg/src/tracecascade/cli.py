"""Command line front end.

Every command prints plain text in a fixed layout. Exit status is 0 on
success, 1 when a checked property fails (non-equivalence, a failed
decomposition check) and 2 on bad input, with ``error: <code>: <detail>`` on
stderr.

Cascade manifests list one automaton file per stage::

    kind: chain                 # or gcs
    alphabet: alphabet.alph
    stage: stage1.aut
    stage: stage2.aut
    accept: (2.1, _, 1)         # chain: flattened global state
    accept: (2, _, _) (_, 1, _) # gcs: one global state per stage
"""

from __future__ import annotations

import argparse
import itertools
import sys
from pathlib import Path

from . import io
from .automata import AsynchronousAutomaton, accepts, run
from .cascade import CascadeChain, GlobalCascadeSequence, gcs_accepts, gcs_run
from .errors import InputError, TraceCascadeError
from .gossip import theta_oracle, vector_clock_gossip
from .krohn_rhodes import acyclic_decompose
from .loctl import compile_gcs, compile_restricted, compile_sprtl, eval, eval_events, is_trace_formula, parse, to_text
from .traces import enumerate_traces, format_alphabet

MAX_ACCEPT_ROWS = 1 << 16


def _formula(args, text: str, alphabet):
    macros = {}
    for spec in getattr(args, "macro", None) or ():
        name, sep, body = spec.partition("=")
        if not sep or not name.strip():
            raise InputError(f"macro must look like NAME=a,b: {spec!r}")
        members = [x.strip() for x in body.split(",") if x.strip()]
        for x in members:
            alphabet.check_letter(x)
        macros[name.strip()] = members
    return parse(text, alphabet, macros)


def _alphabet(args):
    if not getattr(args, "alphabet", None):
        raise InputError("this command needs --alphabet")
    return io.load_alphabet(args.alphabet)


def _bool(v: bool) -> str:
    return "true" if v else "false"


# manifests


class Manifest:
    def __init__(self, kind, alphabet, stages, accept_rows):
        self.kind = kind
        self.alphabet = alphabet
        self.stages = stages
        self.accept_rows = accept_rows

    @property
    def chain(self) -> CascadeChain:
        texts = set(self.accept_rows)
        return CascadeChain(self.stages, lambda g: io.format_global(g) in texts)

    @property
    def sequence(self) -> GlobalCascadeSequence:
        return GlobalCascadeSequence(self.stages)

    def gcs_accepting(self, state) -> bool:
        return " ".join(io.format_global(g) for g in state) in self.accept_rows

    def accepts(self, t) -> bool:
        if self.kind == "chain":
            return accepts(self.chain.automaton, t)
        return gcs_accepts(self.sequence, self.gcs_accepting, t)


def load_manifest(path) -> Manifest:
    path = Path(path)
    kind, alphabet, files, rows = None, None, [], []
    for lineno, raw in enumerate(io.read_text(path).splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        head, rest = head.strip(), rest.strip()
        if not sep:
            raise InputError(f"{path}:{lineno}: expected ':'")
        if head == "kind":
            kind = rest
        elif head == "alphabet":
            alphabet = io.load_alphabet(path.parent / rest)
        elif head == "stage":
            files.append(path.parent / rest)
        elif head == "accept":
            rows.append(" ".join(rest.split()))
        else:
            raise InputError(f"{path}:{lineno}: unrecognised entry {line!r}")
    if kind not in ("chain", "gcs"):
        raise InputError(f"{path}: 'kind:' must be chain or gcs")
    if alphabet is None or not files:
        raise InputError(f"{path}: a manifest needs 'alphabet:' and at least one 'stage:'")
    stages: list[AsynchronousAutomaton] = []
    for k, f in enumerate(files):
        if k == 0:
            context = None
        elif kind == "chain":
            context = ("local", stages[0] if k == 1 else CascadeChain(stages).automaton)
        else:
            context = ("global", list(stages))
        stages.append(io.load_automaton(f, alphabet, context))
    return Manifest(kind, alphabet, stages, rows)


def write_manifest(out: Path, kind, alphabet, stages, accept_rows) -> list[Path]:
    out.mkdir(parents=True, exist_ok=True)
    written = [out / "alphabet.alph"]
    written[0].write_text(format_alphabet(alphabet), encoding="utf-8")
    lines = [f"kind: {kind}", "alphabet: alphabet.alph"]
    for k, A in enumerate(stages):
        if k == 0:
            context = None
        elif kind == "chain":
            context = ("local",)
        else:
            context = ("global", k)
        name = f"stage{k + 1}.aut"
        (out / name).write_text(io.format_automaton(A, "alphabet.alph", context), encoding="utf-8")
        written.append(out / name)
        lines.append(f"stage: {name}")
    lines.extend(f"accept: {row}" for row in accept_rows)
    (out / "manifest.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    written.append(out / "manifest.txt")
    return written


def _chain_rows(chain: CascadeChain) -> list[str]:
    A = chain.automaton
    if len(A.space) > MAX_ACCEPT_ROWS:
        raise InputError("flattened state space too large to list accepting states")
    return [io.format_global(g) for g in A.space.states if A.is_accepting(g)]


def _gcs_rows(seq: GlobalCascadeSequence, F) -> list[str]:

    spaces = [A.space.states for A in seq.stages]
    total = 1
    for s in spaces:
        total *= len(s)
    if total > MAX_ACCEPT_ROWS:
        raise InputError("too many stage state combinations to list the accepting set")
    return [" ".join(io.format_global(g) for g in combo) for combo in itertools.product(*spaces) if F(combo)]


# acceptors for equiv


def _acceptor(spec: str, args):
    """``(alphabet or None, predicate on traces)`` for an acceptor spec."""
    kind, sep, body = spec.partition(":")
    if sep and kind in ("formula", "sprtl", "restricted", "gcs"):
        sigma = _alphabet(args)
        beta = _formula(args, body, sigma)
        if kind == "formula":
            return sigma, lambda t: eval(t, beta)
        if kind == "sprtl":
            A = compile_sprtl(beta, sigma).automaton
            return sigma, lambda t: accepts(A, t)
        if kind == "restricted":
            A = compile_restricted(beta, sigma).automaton
            return sigma, lambda t: accepts(A, t)
        c = compile_gcs(beta, sigma)
        return sigma, lambda t: gcs_accepts(c.sequence, c.accepting, t)
    if sep and kind == "manifest":
        m = load_manifest(body)
        return m.alphabet, m.accepts
    A = io.load_automaton(spec)
    return A.alphabet, lambda t: accepts(A, t)


# commands


def cmd_normalize(args):
    t = io.parse_word(_alphabet(args), args.word)
    print(io.format_word(t))
    return 0


def cmd_run(args):
    A = io.load_automaton(args.automaton, io.load_alphabet(args.alphabet) if args.alphabet else None)
    t = io.parse_word(A.alphabet, args.word)
    s = run(A, t)
    print(f"state: {io.format_global(s)}")
    if A.accepting is not None:
        print(f"accepted: {_bool(A.is_accepting(s))}")
    return 0


def cmd_eval(args):
    sigma = _alphabet(args)
    f = _formula(args, args.formula, sigma)
    t = io.parse_word(sigma, args.word)
    if is_trace_formula(f):
        print(_bool(eval(t, f)))
    else:
        for e, v in enumerate(eval_events(t, f)):
            print(f"{e}:{t.word[e]} {_bool(v)}")
    return 0


def cmd_compile(args):
    sigma = _alphabet(args)
    beta = _formula(args, args.formula, sigma)
    if args.fragment == "since":
        c = compile_sprtl(beta, sigma)
    elif args.fragment == "yleq":
        c = compile_restricted(beta, sigma)
    else:
        c = compile_gcs(beta, sigma)
    print(f"fragment: {args.fragment}")
    print(f"formula: {to_text(beta, sigma)}")
    print(f"stages: {len(c.stages)}")
    for line in c.describe(sigma):
        print(line)
    if args.fragment == "yleq":
        print("gossip: vector-clock (unbounded local states)")
    if args.out:
        if args.fragment == "yleq":
            raise InputError("restricted cascades contain the unbounded gossip automaton and cannot be written out")
        out = Path(args.out)
        if args.fragment == "since":
            written = write_manifest(out, "chain", sigma, c.chain.stages, _chain_rows(c.chain))
        else:
            written = write_manifest(out, "gcs", sigma, c.sequence.stages, _gcs_rows(c.sequence, c.accepting))
        for p in written:
            print(f"wrote: {p}")
    return 0


def cmd_product(args):
    m = load_manifest(args.manifest)
    if m.kind != "chain":
        raise InputError("product expects a chain manifest")
    chain = m.chain
    t = io.parse_word(m.alphabet, args.word)
    g = run(chain.automaton, t)
    print(f"state: {io.format_global(g)}")
    for k, s in enumerate(chain.stage_states(g), 1):
        print(f"stage {k}: {io.format_global(s)}")
    if m.accept_rows:
        print(f"accepted: {_bool(chain.automaton.is_accepting(g))}")
    return 0


def cmd_gcs_run(args):
    m = load_manifest(args.manifest)
    if m.kind != "gcs":
        raise InputError("gcs-run expects a gcs manifest")
    t = io.parse_word(m.alphabet, args.word)
    state = gcs_run(m.sequence, t)
    for k, s in enumerate(state, 1):
        print(f"stage {k}: {io.format_global(s)}")
    if m.accept_rows:
        print(f"accepted: {_bool(m.gcs_accepting(state))}")
    return 0


def cmd_gossip_label(args):
    sigma = _alphabet(args)
    t = io.parse_word(sigma, args.word)
    labelled = theta_oracle(t) if args.oracle else vector_clock_gossip(sigma).label(t)
    names = " ".join(sigma.processes)
    print(f"# event letter gamma rows ({names}), each row over columns ({names})")
    for e, (a, gamma) in enumerate(labelled.word):
        rows = " ".join("".join(str(v) for v in row) for row in gamma)
        print(f"{e}:{a} {rows}")
    return 0


def _language_check(d, max_len: int):
    """Per trace, every start state of the source is tracked by some preimage under the map."""
    phi, psi, f = d.source, d.morphism, d.sim_map
    pre = [f.index(x) for x in range(phi.size)]
    count = 0
    for t in enumerate_traces(phi.alphabet, max_len):
        count += 1
        img, lift = phi(t), psi(t)
        for x in range(phi.size):
            if img[x] != f[lift[pre[x]]]:
                return count, t
    return count, None


def cmd_decompose(args):
    phi = io.load_morphism(args.morphism)
    d = acyclic_decompose(phi)
    sigma = phi.alphabet
    print(f"order: {' '.join(d.order)}")
    for x in d.factors:
        print(f"factor: {x.describe(sigma)}")
    print(f"carrier: {d.morphism.size}")
    print(f"full-form: {_bool(d.full_form)}")
    if not args.check:
        return 0
    ok = d.verify()
    print(f"simulation: {'ok' if ok else 'FAILED'}")
    count, bad = _language_check(d, args.max_len)
    if bad is None:
        print(f"language: ok (traces checked: {count})")
    else:
        print(f"language: FAILED at {io.format_word(bad)}")
    return 0 if ok and bad is None else 1


def cmd_equiv(args):
    s1, p1 = _acceptor(args.left, args)
    s2, p2 = _acceptor(args.right, args)
    if s1 != s2:
        raise InputError("the two acceptors are over different alphabets")
    count = 0
    for t in enumerate_traces(s1, args.max_len):
        count += 1
        a, b = p1(t), p2(t)
        if a != b:
            print(f"counterexample: {io.format_word(t) or '(empty)'}")
            print(f"left: {_bool(a)} right: {_bool(b)}")
            return 1
    print(f"equivalent (traces checked: {count})")
    return 0


def cmd_dot(args):
    if args.what == "automaton":
        A = io.load_automaton(args.target, io.load_alphabet(args.alphabet) if args.alphabet else None)
        sys.stdout.write(io.automaton_dot(A))
    else:
        t = io.parse_word(_alphabet(args), args.target)
        sys.stdout.write(io.poset_dot(t))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tracecascade", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(fn=fn)
        return p

    p = add("normalize", cmd_normalize, "print the normal form of a word")
    p.add_argument("--alphabet", required=True)
    p.add_argument("word")

    p = add("run", cmd_run, "run an automaton file on a trace")
    p.add_argument("automaton")
    p.add_argument("word")
    p.add_argument("--alphabet")

    p = add("eval", cmd_eval, "evaluate a formula on a trace")
    p.add_argument("--alphabet", required=True)
    p.add_argument("--macro", action="append", metavar="NAME=a,b")
    p.add_argument("formula")
    p.add_argument("word")

    p = add("compile", cmd_compile, "compile a formula into a cascade of resets")
    p.add_argument("--alphabet", required=True)
    p.add_argument("--fragment", choices=("since", "yleq", "prev"), default="since")
    p.add_argument("--macro", action="append", metavar="NAME=a,b")
    p.add_argument("--out", help="directory for the manifest and stage files")
    p.add_argument("formula")

    p = add("product", cmd_product, "run a local cascade given by a chain manifest")
    p.add_argument("manifest")
    p.add_argument("word")

    p = add("gcs-run", cmd_gcs_run, "run a global cascade sequence given by a gcs manifest")
    p.add_argument("manifest")
    p.add_argument("word")

    p = add("gossip-label", cmd_gossip_label, "print the primary order decoration of every event")
    p.add_argument("--alphabet", required=True)
    p.add_argument("--oracle", action="store_true", help="read labels off the poset instead of the vector clocks")
    p.add_argument("word")

    p = add("decompose", cmd_decompose, "decompose a morphism over an acyclic architecture")
    p.add_argument("morphism")
    p.add_argument("--check", action="store_true")
    p.add_argument("--max-len", type=int, default=4)

    p = add("equiv", cmd_equiv, "compare two acceptors on every trace up to a length")
    p.add_argument("left", help="automaton file, manifest:PATH, formula:F, sprtl:F, restricted:F or gcs:F")
    p.add_argument("right")
    p.add_argument("--alphabet")
    p.add_argument("--macro", action="append", metavar="NAME=a,b")
    p.add_argument("--max-len", type=int, default=5)

    p = add("dot", cmd_dot, "Graphviz output for an automaton or a trace poset")
    dots = p.add_subparsers(dest="what", required=True)
    q = dots.add_parser("automaton", help="reachable global states of an automaton file")
    q.add_argument("target")
    q.add_argument("--alphabet")
    q = dots.add_parser("poset", help="Hasse diagram of a trace")
    q.add_argument("target", metavar="word")
    q.add_argument("--alphabet", required=True)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except TraceCascadeError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: input: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
