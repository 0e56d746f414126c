"""The prime-line configuration: an exact big-integer sum against the float one.

Points (a/p, 0, ..., 0) with p prime pile up on a single line. With ones as
coefficients the sieve sum has a closed integer form, and we compare it
with the direct evaluation. Note the zero contributions whenever p
divides 2N+1.
"""

from largesieve.expsums import exact_lhs_prime_line, make_coeffs, sieve_lhs
from largesieve.torus import enumerate_prime_line_T

n = 2
for N in (2, 5, 7):
    c = make_coeffs(n, N, "ones")
    for X in (5, 11, 13):
        exact = exact_lhs_prime_line(n, X, N)
        direct = sieve_lhs(enumerate_prime_line_T(n, X), c).value
        print(f"N={N:2d} X={X:2d}  exact={exact:>10d}  direct={direct:14.3f}  rel err={abs(direct - exact) / exact:.1e}")
