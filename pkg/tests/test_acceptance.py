"""Acceptance criteria, one test each; a PASS/FAIL line per criterion is printed at the end of the run.

Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import math
import os
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from largesieve.cli import main
from largesieve.duality import dual_constant, forward_constant, random_complex_matrix
from largesieve.experiments import kernel_identity_check, run_classical_check, run_thm2_check, slope_fit, thm2_spaced
from largesieve.expsums import exact_lhs_prime_line, make_coeffs, sieve_lhs
from largesieve.kernel import v_closed, v_truncated
from largesieve.spacing import farey_line_max_count, lemma2_bound, m_of
from largesieve.torus import PointSet, enumerate_order_ball, enumerate_prime_line_T, enumerate_S


def farey(Q):
    return [Fraction(a, q) for q in range(1, Q + 1) for a in range(q) if math.gcd(a, q) == 1]


def test_c1_duality_constants_agree():
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        rows, cols = (int(v) for v in rng.integers(1, 21, size=2))
        T = random_complex_matrix(rows, cols, rng)
        f, d = forward_constant(T), dual_constant(T)
        worst = max(worst, abs(f - d) / f)
    elapsed = time.perf_counter() - start
    print(f"C1 max relative gap {worst:.3e}, {elapsed:.2f}s")
    assert worst <= 1e-8
    assert elapsed < 10


def test_c2_montgomery_vaughan_bound():
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(100):
        pts = farey(int(rng.integers(2, 51)))
        keep = rng.random(len(pts)) < rng.uniform(0.05, 1.0)
        keep[int(rng.integers(len(pts)))] = True
        chosen = [p for p, k in zip(pts, keep) if k]
        N = int(rng.integers(1, 201))
        r = run_classical_check(chosen, N, seed=int(rng.integers(2**63)))
        assert r.lhs <= (1 / r.extra["delta"] + N) * r.l2 * (1 + 1e-10)
        worst = max(worst, r.extra["slack"])
    print(f"C2 largest LHS / bound {worst:.4f}")


def _thm2_instance(rng):
    if rng.random() < 0.5:
        Q = [int(q) for q in rng.integers(2, 13, size=2)]
        deltas = [(1 - 1e-9) / q for q in Q]
        pts = np.array([[a / Q[0], b / Q[1]] for a in range(Q[0]) for b in range(Q[1])])
    else:
        deltas = list(rng.uniform(0.02, 0.5, size=2))
        kept = []
        for x in rng.random((400, 2)):
            if thm2_spaced(np.array(kept + [x]), deltas):
                kept.append(x)
        pts = np.array(kept)
    shape = tuple(int(v) for v in rng.integers(1, 26, size=2))
    c = rng.uniform(-1, 1, shape) + 1j * rng.uniform(-1, 1, shape)
    offsets = [int(v) for v in rng.integers(-50, 51, size=2)]
    return pts, deltas, c, offsets


def test_c3_product_bound():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(50):
        pts, deltas, c, offsets = _thm2_instance(rng)
        assert thm2_spaced(pts, deltas)
        r = run_thm2_check(pts, deltas, c, offsets)
        assert r.lhs <= r.majorants["thm2_product"] * r.l2 * (1 + 1e-10)
        worst = max(worst, r.ratio / r.majorants["thm2_product"])
    print(f"C3 largest LHS / bound {worst:.4f}")


def test_c4_kernel_closed_form():
    start = time.perf_counter()
    worst = 0.0
    for N in (1, 4, 16):
        K = math.ceil(4 * N * N / 1e-4)
        for y in (0, Fraction(1, 8 * N), Fraction(1, 4 * N), Fraction(7, 16 * N), 0.4):
            err = abs(v_truncated(y, N, K) - v_closed(y, N))
            worst = max(worst, err)
            assert err <= 1e-3, (N, y, err)
    elapsed = time.perf_counter() - start
    print(f"C4 max |truncated - closed| {worst:.3e}, {elapsed:.2f}s")
    assert elapsed < 30


def test_c5_pair_sum_identity_and_positivity():
    rng = np.random.default_rng(5)
    worst = 0.0
    checked = 0
    for n in (1, 2):
        for X in range(2, 9):
            pts = enumerate_S(n, X)
            for N in range(1, 7):
                for _ in range(20):
                    b = rng.uniform(-1, 1, len(pts)) + 1j * rng.uniform(-1, 1, len(pts))
                    r = kernel_identity_check(pts, b, N, K_ext=50 * N)
                    assert r.identity_ok, (n, X, N, r)
                    assert r.box_sum <= r.alpha_sum * (1 + 1e-9), (n, X, N, r)
                    worst = max(worst, abs(r.pair_sum - r.alpha_sum) / r.tail_budget)
                    checked += 1
    print(f"C5 {checked} instances, largest |pair - alpha| / budget {worst:.3f}")


def test_c6_spacing():
    assert m_of(enumerate_S(1, 4), 0.2).m_value == 3

    ys = np.geomspace(1e-3, 0.6, 20)
    for pts in (enumerate_S(1, 32), enumerate_S(2, 8)):
        values = [m_of(pts, Y).m_value for Y in ys]
        assert values == sorted(values)

    worst = 0.0
    for n in (1, 2):
        for X in (4, 8, 16, 32):
            pts = enumerate_S(n, X)
            for Y in (1 / X**2, 1 / X, 1 / 4):
                rep = m_of(pts, Y, method="grid")
                worst = max(worst, rep.m_value / lemma2_bound(n, X, Y))
    print(f"C6 max M / bound {worst:.3f}")
    assert worst <= 16

    for X in (32, 64):
        m = farey_line_max_count(2, X, Fraction(4, X))
        print(f"C6 Farey line X={X}: max count {m} vs 0.4 X = {0.4 * X}")
        assert m >= 0.4 * X


def test_c7_counterexample_exactness():
    ones_cache = {}
    for n in (1, 2):
        for N in range(1, 13):
            c = ones_cache.setdefault((n, N), make_coeffs(n, N, "ones"))
            for X in range(2, 14):
                exact = exact_lhs_prime_line(n, X, N)
                direct = sieve_lhs(enumerate_prime_line_T(n, X), c, dense=True).value
                assert abs(direct - exact) <= 1e-9 * max(1, exact), (n, X, N, exact, direct)
    # 2N+1 = 15: primes 3 and 5 contribute nothing
    for n in (1, 2):
        assert exact_lhs_prime_line(n, 5, 7) == exact_lhs_prime_line(n, 2, 7)
        c = make_coeffs(n, 7, "ones")
        for p in (3, 5):
            line = [b for b in enumerate_prime_line_T(n, p) if b.coords[0].denominator == p]
            assert sieve_lhs(PointSet.custom(line), c, dense=True).value == pytest.approx(0, abs=1e-9)


def test_c8_growth_exponents():
    Xs = [8, 16, 32, 64]
    s_slope = slope_fit(Xs, [len(enumerate_S(2, X)) for X in Xs])
    ball_slope = slope_fit(Xs, [len(enumerate_order_ball(1, X)) for X in Xs])
    print(f"C8 slope |S(2,X)| {s_slope:.3f}, slope |ball(1,X)| {ball_slope:.3f}")
    assert 2.6 <= s_slope <= 3.2
    assert 1.8 <= ball_slope <= 2.1


CLI_CONFIGS = [
    ["enumerate", "--n", "2", "--X", "5", "--list"],
    ["ratio", "--n", "1", "2", "--X", "6", "--N", "3", "--coeff", "random_complex", "--seed", "17"],
    ["spacing", "--n", "2", "--X", "8", "--Y", "0.05", "1/4"],
    ["kernel", "--N", "3", "--K", "5000"],
    ["kernel", "--identity", "--n", "2", "--X", "6", "--N", "2", "--trials", "3", "--seed", "9"],
    ["duality", "--size", "8", "--trials", "20", "--seed", "4"],
    ["counterexample", "--n", "2", "--X", "13", "--N", "7"],
    ["sweep", "--quantity", "m_value", "--n", "1", "--from", "8", "--to", "32", "--Y", "0.1"],
]


@pytest.mark.parametrize("fmt", ["json", "csv"])
def test_c9_cli_determinism(fmt, capsys):
    for argv in CLI_CONFIGS:
        outs = []
        for _ in range(2):
            assert main(argv + ["--format", fmt]) == 0
            outs.append(capsys.readouterr().out.encode())
        assert outs[0] == outs[1], argv
    # separate processes with different hash seeds
    for argv in CLI_CONFIGS:
        outs = []
        for hashseed in ("1", "2"):
            env = dict(os.environ, PYTHONHASHSEED=hashseed)
            proc = subprocess.run(
                [sys.executable, "-m", "largesieve", *argv, "--format", fmt], capture_output=True, env=env, check=True
            )
            outs.append(proc.stdout)
        assert outs[0] == outs[1], argv
