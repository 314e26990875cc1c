"""
Goldman bracket on a one-holed torus
====================================

Loops are cyclic words in the free generators; the bracket sums over
crossings of the two loops.
"""

from totaljohnson import GoldmanElement, TruncationContext, bracket, standard_surface

S = standard_surface(1)
ctx = TruncationContext(6, S.alphabet)
print("boundary:", [S.alphabet.format_cyclic(w) for w in S.boundary_words()])

a = GoldmanElement.parse(S, "|a|", ctx)
b = GoldmanElement.parse(S, "|b|", ctx)
print("[a, b] =", bracket(a, b).format())
print("[b, a] =", bracket(b, a).format())

# the boundary loop is central
d = GoldmanElement.parse(S, "|a b' a' b|", ctx)
print("[d, a] =", bracket(d, a).format())
