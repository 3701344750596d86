"""
Who knows more recent news
==========================

On the triangle alphabet every event is labelled with the order of its
primary events: for each pair of processes (i, j), whether the latest
i-event below it lies below the latest j-event below it. A restricted
cascade reads only these labels.
"""

from tracecascade import accepts, enumerate_traces, from_word, vector_clock_gossip
from tracecascade.catalog import triangle_alphabet
from tracecascade.loctl import compile_restricted, eval, parse

sigma = triangle_alphabet()
G = vector_clock_gossip(sigma)

# %%
# At the final ``c`` of (ab)^n c, p3 learns that p1's news is older than its own.
# One more ``a`` flips it.
for n in (1, 3, 10):
    yes = G.label(from_word(sigma, "ab" * n + "c")).word[-1][1]
    no = G.label(from_word(sigma, "ab" * n + "ac")).word[-1][1]
    print(n, "gamma13 after c:", yes[0][2], "after ac:", no[0][2])

# %%
# ``E[3] Yleq(1,3)`` compiled as a restricted cascade over the labels.
beta = parse("E[3] Yleq(1,3)", sigma)
R = compile_restricted(beta, sigma).automaton
print("abc:", accepts(R, from_word(sigma, "abc")), "abac:", accepts(R, from_word(sigma, "abac")))
print("matches the formula:", all(accepts(R, t) == eval(t, beta) for t in enumerate_traces(sigma, 5)))
