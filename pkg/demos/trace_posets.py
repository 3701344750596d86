"""
Traces as labelled posets
=========================

Two words over a distributed alphabet name the same trace when they differ
only by swapping neighbouring letters that share no process.
"""

from tracecascade import from_word, i_view, linearizations
from tracecascade.catalog import path_alphabet
from tracecascade.io import poset_dot

# %%
# Three processes on a path. ``b`` synchronizes p1 with p2, ``c`` synchronizes
# p2 with p3; ``a`` and ``d`` are private.
sigma = path_alphabet()
for a in sigma.letters:
    print(a, sorted(sigma.processes[i] for i in sigma.loc(a)))

# %%
# ``a`` and ``d`` commute, so both words below have the same normal form.
t = from_word(sigma, "dab")
u = from_word(sigma, "adb")
print(t, "==", u, t == u)
print("linearizations:", ["".join(w) for w in linearizations(t)])

# %%
# The view of p1 drops everything p1 cannot have heard about.
t = from_word(sigma, "abdc")
for i, p in enumerate(sigma.processes):
    print(p, "sees", i_view(t, i))

# %%
# Graphviz source for the Hasse diagram.
print(poset_dot(t))
