"""Forward and dual large sieve constants coincide.

Power iteration estimates the largest singular value squared from both
sides of a sieve matrix built from points of S(1, X). The two numbers
should agree to about twelve digits.
"""

from largesieve.duality import dual_constant, forward_constant, sieve_matrix
from largesieve.torus import enumerate_S

for X, N in ((6, 3), (10, 5), (20, 8)):
    T = sieve_matrix(enumerate_S(1, X), N)
    f, d = forward_constant(T), dual_constant(T)
    print(f"X={X:2d} N={N}  shape={T.shape}  forward={f:.12f}  dual={d:.12f}")
