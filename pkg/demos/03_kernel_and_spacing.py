"""Fejer-type kernel sums and neighbour counts.

First part: the truncated lattice sum of the kernel converges to the
triangle closed form as the truncation K grows.

Second part: the largest number of S(2, X) points in a ball of radius Y,
compared with the counting bound.
"""

from fractions import Fraction

from largesieve.kernel import v_closed, v_truncated
from largesieve.spacing import lemma2_bound, m_of
from largesieve.torus import enumerate_S

N = 4
y = Fraction(1, 8 * N)
print(f"closed form V({y}) = {v_closed(y, N):.8f}")
for K in (100, 1000, 10000, 100000):
    print(f"  K={K:>6}  truncated={v_truncated(y, N, K):.8f}")

X = 16
pts = enumerate_S(2, X)
print(f"\n|S(2,{X})| = {len(pts)}")
for Y in (Fraction(1, X * X), Fraction(1, X), Fraction(1, 4)):
    rep = m_of(pts, Y, method="grid")
    print(f"  Y={str(Y):>6}  M={rep.m_value:>4}  bound={lemma2_bound(2, X, float(Y)):9.1f}  at {rep.argmax_point}")
