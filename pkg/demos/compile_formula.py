"""
Compiling a past-time formula into a cascade
============================================

A Since-only formula compiles to a chain of two-state reset automata, each
living on a single process. The chain is aperiodic and decompiles back to an
equivalent formula.
"""

from tracecascade import accepts, enumerate_traces
from tracecascade.catalog import path_alphabet
from tracecascade.loctl import chain_is_aperiodic, compile_sprtl, decompile_sprtl, eval, parse, to_text

sigma = path_alphabet()

# %%
# "The latest p3 event is a ``d`` that has seen a ``c`` since the previous ``d``."
beta = parse("E[3] (d & ((!d) S[3] c))", sigma)
compiled = compile_sprtl(beta, sigma)
for line in compiled.describe(sigma):
    print(line)

# %%
# The compiled automaton and the formula agree on every short trace.
traces = list(enumerate_traces(sigma, 5))
agree = all(accepts(compiled.automaton, t) == eval(t, beta) for t in traces)
print(f"{len(traces)} traces, agree={agree}")
print("aperiodic:", chain_is_aperiodic(compiled.automaton))

# %%
# Reading the chain back gives a formula with the same models.
back = decompile_sprtl(compiled.chain)
print(to_text(back)[:120], "...")
print("same language:", all(eval(t, back) == eval(t, beta) for t in enumerate_traces(sigma, 4)))
