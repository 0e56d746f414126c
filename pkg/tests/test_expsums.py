import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_expsum, prime_line_pair_oracle
from largesieve.errors import ResourceCapError
from largesieve.expsums import (
    CoeffBox,
    eval_expsum,
    exact_lhs_prime_line,
    l2_norm_sq,
    make_coeffs,
    sieve_lhs,
    twisted_coeffs,
    unit_phase,
)
from largesieve.torus import (
    PointSet,
    TorusPoint,
    enumerate_order_ball,
    enumerate_S,
)

F = Fraction


@pytest.mark.parametrize("t,expected", [(0, 1), (F(1, 2), -1), (F(1, 4), 1j), (F(5, 4), 1j), (-0.75, 1j), (3, 1)])
def test_unit_phase(t, expected):
    assert unit_phase(t) == pytest.approx(expected, abs=1e-15)


@settings(max_examples=200)
@given(st.one_of(st.fractions(max_denominator=10**6), st.floats(-1e6, 1e6)))
def test_unit_phase_modulus(t):
    assert abs(abs(unit_phase(t)) - 1) <= 1e-15


def test_eval_expsum_examples():
    ones = make_coeffs(1, 2, "ones")
    assert eval_expsum(ones, TorusPoint.of((1, 3))) == pytest.approx(-1, abs=1e-12)
    assert eval_expsum(ones, TorusPoint.of((1, 3)), dense=True) == pytest.approx(-1, abs=1e-12)
    for n, N in [(1, 3), (2, 2), (3, 1)]:
        zero = TorusPoint.of(*[(0, 1)] * n)
        assert eval_expsum(make_coeffs(n, N, "ones"), zero) == pytest.approx((2 * N + 1) ** n)
    beta0 = TorusPoint.of((2, 7), (5, 12))
    assert eval_expsum(twisted_coeffs(beta0, 4), beta0) == pytest.approx(81)
    assert eval_expsum(twisted_coeffs(beta0, 4), beta0, dense=True) == pytest.approx(81)


def test_eval_expsum_dimension_mismatch():
    with pytest.raises(ValueError):
        eval_expsum(make_coeffs(2, 1, "ones"), TorusPoint.of((1, 2)))


@pytest.mark.parametrize("n,N", [(1, 4), (2, 3), (3, 1)])
def test_eval_expsum_matches_direct_sum(n, N):
    c = make_coeffs(n, N, "random_complex", seed=5)
    for beta in list(enumerate_order_ball(n, 4))[:12]:
        expected = brute_expsum(lambda a: c[a], N, beta.coords)
        assert eval_expsum(c, beta) == pytest.approx(expected, rel=1e-12, abs=1e-12)


def test_large_alpha_keeps_phase_exact():
    N = 10**6 + 1
    c = make_coeffs(1, N, "ones")
    got = eval_expsum(c, TorusPoint.of((1, 3)))
    # full periods of e(m/3) cancel; only the leading (2N+1) mod 3 terms survive
    expected = sum(cmath.exp(2j * math.pi * (m % 3) / 3) for m in range(-N, -N + (2 * N + 1) % 3))
    assert got == pytest.approx(expected, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(0, 16), st.integers(0, 2**32), st.integers(1, 12), st.integers(0, 11))
def test_rank1_fast_path_matches_dense(n, N, seed, q, a):
    if (2 * N + 1) ** n > 40000:
        N = 3
    rng = np.random.default_rng(seed)
    m = 2 * N + 1
    c = CoeffBox.from_factors([rng.normal(size=m) + 1j * rng.normal(size=m) for _ in range(n)])
    beta = TorusPoint.of(*[(a + i, q + i) for i in range(n)])
    fast = eval_expsum(c, beta)
    dense = eval_expsum(c, beta, dense=True)
    assert abs(fast - dense) <= 1e-9 * max(1.0, abs(dense))


def test_rank1_dense_equals_outer_product():
    c = CoeffBox.from_factors([np.arange(3), np.array([1, 2j, 3])])
    d = c.dense()
    for i in range(3):
        for j in range(3):
            assert d[i, j] == c.factors[0][i] * c.factors[1][j]
    assert c[(-1, 1)] == 0 and c[(1, 0)] == 4j


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 2), st.integers(0, 6), st.integers(0, 1000), st.integers(1, 9), st.integers(0, 8))
def test_triangle_inequality(n, N, seed, q, a):
    c = make_coeffs(n, N, "random_complex", seed)
    beta = TorusPoint.of(*[(a, q)] * n)
    assert abs(eval_expsum(c, beta)) <= np.abs(c.dense()).sum() * (1 + 1e-12)


def test_sieve_lhs_examples():
    zero = PointSet.custom([TorusPoint.of((0, 1))])
    assert sieve_lhs(zero, make_coeffs(1, 2, "ones")).value == pytest.approx(25)
    half = PointSet.custom([TorusPoint.of((1, 2))])
    assert sieve_lhs(half, make_coeffs(1, 1, "ones")).value == pytest.approx(1)
    empty = enumerate_S(1, 1)
    r = sieve_lhs(empty, make_coeffs(1, 1, "ones"))
    assert r.value == 0 and r.point_count == 0


def test_sieve_lhs_additive_over_disjoint_union():
    pts = enumerate_order_ball(2, 6)
    c = make_coeffs(2, 3, "random_complex", seed=9)
    a = PointSet.custom(pts.points[:20])
    b = PointSet.custom(pts.points[20:])
    assert sieve_lhs(pts, c).value == pytest.approx(sieve_lhs(a, c).value + sieve_lhs(b, c).value, rel=1e-12)


def test_l2_norm_sq_examples():
    assert l2_norm_sq(make_coeffs(2, 1, "ones")) == 9
    assert l2_norm_sq(CoeffBox(1, 2, values=np.zeros(5))) == 0
    assert l2_norm_sq(twisted_coeffs(TorusPoint.of((2, 9)), 3)) == pytest.approx(7)
    c = make_coeffs(2, 2, "random_complex", seed=1)
    assert l2_norm_sq(c) == pytest.approx(float(np.sum(np.abs(c.values) ** 2)))


# --- exact prime-line path ----------------------------------------------------


def test_exact_prime_line_examples():
    assert exact_lhs_prime_line(1, 3, 2) == 3
    assert exact_lhs_prime_line(2, 3, 2) == 75
    assert exact_lhs_prime_line(1, 2, 1) == 1
    assert sieve_lhs(PointSet.custom([TorusPoint.of((1, 2))]), make_coeffs(1, 1, "ones")).value == pytest.approx(1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_exact_prime_line_matches_pair_count_oracle(n):
    for X in range(1, 20):
        for N in range(0, 10):
            assert exact_lhs_prime_line(n, X, N) == prime_line_pair_oracle(n, X, N)


def test_prime_contribution_vanishes_when_p_divides_box_length():
    # 2N+1 = 15: primes 3 and 5 add nothing
    assert exact_lhs_prime_line(1, 5, 7) == exact_lhs_prime_line(1, 2, 7)
    assert exact_lhs_prime_line(2, 5, 7) == exact_lhs_prime_line(2, 2, 7)
    assert exact_lhs_prime_line(1, 7, 7) > exact_lhs_prime_line(1, 5, 7)


def test_exact_prime_line_is_big_int():
    v = exact_lhs_prime_line(4, 50, 10**6)
    assert isinstance(v, int) and v > 2**64


# --- coefficient factory ------------------------------------------------------


def test_make_coeffs_examples():
    assert make_coeffs(1, 1, "ones").dense().tolist() == [1, 1, 1]
    d = make_coeffs(2, 0, "delta").dense()
    assert d.shape == (1, 1) and d[0, 0] == 1
    delta = make_coeffs(2, 2, "delta").dense()
    assert delta[2, 2] == 1 and np.count_nonzero(delta) == 1


def test_random_coeffs_deterministic():
    a = make_coeffs(1, 2, "random_complex", seed=42)
    b = make_coeffs(1, 2, "random_complex", seed=42)
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, make_coeffs(1, 2, "random_complex", seed=43).values)
    assert np.all(np.abs(a.values.real) <= 1) and np.all(np.abs(a.values.imag) <= 1)
    # negative and full 64-bit seeds are accepted
    make_coeffs(1, 2, "random_complex", seed=-1)
    make_coeffs(1, 2, "random_complex", seed=2**64 - 1)


def test_make_coeffs_errors():
    with pytest.raises(ValueError):
        make_coeffs(1, -1, "ones")
    with pytest.raises(ValueError):
        make_coeffs(1, 1, "bogus")
    with pytest.raises(ValueError):
        make_coeffs(1, 1, "file")
    with pytest.raises(ResourceCapError):
        make_coeffs(3, 300, "random_complex")


def test_huge_factored_box_stays_factored():
    c = make_coeffs(3, 500, "ones")
    assert eval_expsum(c, TorusPoint.of((0, 1), (0, 1), (0, 1))) == pytest.approx(1001**3)
    with pytest.raises(ResourceCapError):
        c.dense()
