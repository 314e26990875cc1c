"""
Dehn twists as exponentials
===========================

The twist about a simple closed curve acts on based paths as the
exponential of the loop element ``1/2 |log(c)^2|``.
"""

from totaljohnson import L_element, PathElement, TruncationContext, exp_sigma, standard_surface

S = standard_surface(1)
N = 6
ctx = TruncationContext(N, S.alphabet)

# the exponential needs the generator one degree further
L = L_element(S.parse_cyclic("a"), TruncationContext(N + 1, S.alphabet), S)

for gen in ("a", "b"):
    p = PathElement.word(S, S.parse(gen), ctx)
    print(f"T_a({gen}) =", exp_sigma(L, p).format())

# compare against the group automorphism b -> a b
print("a b       =", PathElement.word(S, S.parse("a b"), ctx).format())
