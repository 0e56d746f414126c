"""Majorants, inequality checks and experiment drivers.

The ``X^eps`` factors and implied constants of the asymptotic bounds are not
computable, so the drivers report ratios, fitted constants and log-log
slopes. Only inequalities with explicit constants (Montgomery-Vaughan, the
product bound for well-spaced vectors, positivity of the kernel weights) are
asserted, and a failure there raises :class:`InvariantViolation`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from . import __version__
from .errors import InvariantViolation, ResourceCapError
from .expsums import (
    SEED_MASK,
    csum,
    exact_lhs_prime_line,
    l2_norm_sq,
    make_coeffs,
    phase_table,
    sieve_lhs,
)
from .kernel import phi_at_multiples
from .spacing import min_spacing
from .torus import PointSet, enumerate_set

THEOREM_RTOL = 1e-10
EXACT_RTOL = 1e-9
POSITIVITY_RTOL = 1e-9
IDENTITY_SET_CAP = 200


@dataclass
class ExperimentReport:
    experiment: str
    params: dict[str, Any]
    lhs: float | None = None
    exact_lhs: int | None = None
    l2: float | None = None
    ratio: float | None = None
    majorants: dict[str, float] = field(default_factory=dict)
    fitted_constant: float | None = None
    slope: float | None = None
    checks: dict[str, bool] = field(default_factory=dict)
    extra: dict[str, Any] = field(default_factory=dict)
    tool_version: str = __version__

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict[str, Any]:
        return {
            "experiment": self.experiment,
            "params": dict(self.params),
            "results": {
                "lhs": self.lhs,
                "exact_lhs": self.exact_lhs,
                "l2": self.l2,
                "ratio": self.ratio,
                "majorants": dict(self.majorants),
                "fitted_constant": self.fitted_constant,
                "slope": self.slope,
                "checks": dict(self.checks),
                "extra": dict(self.extra),
            },
            "tool_version": self.tool_version,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ExperimentReport":
        r = d["results"]
        return cls(
            experiment=d["experiment"],
            params=dict(d["params"]),
            lhs=r.get("lhs"),
            exact_lhs=r.get("exact_lhs"),
            l2=r.get("l2"),
            ratio=r.get("ratio"),
            majorants=dict(r.get("majorants", {})),
            fitted_constant=r.get("fitted_constant"),
            slope=r.get("slope"),
            checks=dict(r.get("checks", {})),
            extra=dict(r.get("extra", {})),
            tool_version=d.get("tool_version", __version__),
        )


# --- majorants --------------------------------------------------------------


def majorant_gallagher(n: int, N: int, X: int) -> float:
    return float(N**n + X ** (2 * n))


def majorant_goal(n: int, N: int, X: int) -> float:
    return float(N**n + X ** (n + 1))


def majorant_improved(n: int, N: int, X: int) -> float:
    return float(X ** (n + 1) + N ** (n - 1) * X**2 + N**n)


def majorant_mv_classical(delta: float, N: int) -> float:
    if not 0 < delta <= 0.5:
        raise ValueError("delta must lie in (0, 1/2]")
    return 1 / delta + N


def majorant_thm2_product(N_list: Sequence[int], delta_list: Sequence[float]) -> float:
    if len(N_list) != len(delta_list):
        raise ValueError("N_list and delta_list must have equal length")
    if any(not 0 < d <= 0.5 for d in delta_list):
        raise ValueError("each delta must lie in (0, 1/2]")
    return math.prod((math.sqrt(Nj) + math.sqrt(1 / dj)) ** 2 for Nj, dj in zip(N_list, delta_list))


# --- ratio experiment -------------------------------------------------------


def run_ratio_experiment(
    n: int,
    X: int,
    N: int,
    set_kind: str = "order_ball",
    coeff_kind: str = "ones",
    seed: int = 0,
    cap: int | None = None,
    coeff_file=None,
) -> ExperimentReport:
    """LHS over a point family against every majorant.

    The Montgomery-Vaughan (``n = 1``) and product majorants use box length
    ``2N+1`` and the observed minimum spacing (1/2 for a single point); they
    are theorems and are checked. ``fitted_constant`` is ``ratio`` over the
    improved majorant.
    """
    points = enumerate_set(set_kind, n, X, cap)
    c = make_coeffs(n, N, coeff_kind, seed, path=coeff_file)
    lhs = sieve_lhs(points, c).value
    l2 = l2_norm_sq(c)
    ratio = lhs / l2 if l2 > 0 else 0.0
    length = 2 * N + 1
    delta = min_spacing(points) if len(points) >= 2 else 0.5
    majorants = {
        "gallagher": majorant_gallagher(n, N, X),
        "goal": majorant_goal(n, N, X),
        "improved": majorant_improved(n, N, X),
        "thm2_product": majorant_thm2_product([length] * n, [delta] * n),
    }
    if n == 1:
        majorants["mv_classical"] = majorant_mv_classical(delta, length)
    checks = {}
    for key in ("mv_classical", "thm2_product"):
        if key in majorants:
            checks[key] = ratio <= majorants[key] * (1 + THEOREM_RTOL)
    exact = None
    if set_kind == "prime_line_T" and coeff_kind == "ones":
        exact = exact_lhs_prime_line(n, X, N)
        checks["exact_match"] = abs(lhs - exact) <= EXACT_RTOL * max(1, exact)
    params = {"n": n, "X": X, "N": N, "set": set_kind, "coeff": coeff_kind, "seed": seed}
    return ExperimentReport(
        "ratio",
        params,
        lhs=lhs,
        exact_lhs=exact,
        l2=l2,
        ratio=ratio,
        majorants=majorants,
        fitted_constant=ratio / majorants["improved"],
        checks=checks,
        extra={"point_count": len(points), "min_spacing": delta},
    )


def counterexample_report(n: int, X: int, N: int) -> ExperimentReport:
    """Exact and floating LHS over the prime-line set with all-ones coefficients."""
    r = run_ratio_experiment(n, X, N, "prime_line_T", "ones")
    r.experiment = "counterexample"
    r.params = {"n": n, "X": X, "N": N}
    return r


# --- one-dimensional and product-form checks --------------------------------


def _phase_matrix_1d(points: Sequence, ns: np.ndarray) -> np.ndarray:
    rows = []
    for x in points:
        if isinstance(x, (int, Fraction)):
            x = Fraction(x) % 1
            q = x.denominator
            rows.append(phase_table(q)[(ns * x.numerator) % q])
        else:
            t = ns * float(x)
            t = t - np.rint(t)
            rows.append(np.exp(2j * np.pi * t))
    return np.array(rows).reshape(len(points), len(ns))


def _min_spacing_1d(points: Sequence) -> float:
    vals = sorted(float(Fraction(x) % 1) if isinstance(x, (int, Fraction)) else float(x) % 1.0 for x in points)
    if len(vals) < 2:
        return 0.5
    gaps = np.diff(vals + [vals[0] + 1.0])
    return float(min(gaps.min(), 0.5))


def random_coeff_vector(N: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed & SEED_MASK)
    return rng.uniform(-1, 1, N) + 1j * rng.uniform(-1, 1, N)


def run_classical_check(points: Sequence, N: int, coeffs=None, seed: int = 0) -> ExperimentReport:
    """Montgomery-Vaughan: ``sum_k |sum_{n=1}^N a_n e(x_k n)|^2 <= (1/delta + N) sum |a_n|^2``.

    ``delta`` is the minimum pairwise distance mod 1 (1/2 for a single point).
    Rational points get exact phases.
    """
    if not len(points):
        raise ValueError("need at least one point")
    a = random_coeff_vector(N, seed) if coeffs is None else np.asarray(coeffs, dtype=complex)
    if a.shape != (N,):
        raise ValueError(f"expected {N} coefficients, got shape {a.shape}")
    delta = _min_spacing_1d(points)
    if delta <= 0:
        raise ValueError("points must be distinct modulo 1")
    E = _phase_matrix_1d(points, np.arange(1, N + 1, dtype=np.int64))
    lhs = math.fsum((np.abs(E @ a) ** 2).tolist())
    l2 = math.fsum((np.abs(a) ** 2).tolist())
    bound = majorant_mv_classical(delta, N)
    report = ExperimentReport(
        "classical",
        {"N": N, "points": len(points), "seed": seed},
        lhs=lhs,
        l2=l2,
        ratio=lhs / l2 if l2 > 0 else 0.0,
        majorants={"mv_classical": bound},
        checks={"mv_classical": lhs <= bound * l2 * (1 + THEOREM_RTOL)},
        extra={"delta": delta, "slack": lhs / (bound * l2) if l2 > 0 else 0.0},
    )
    if not report.ok:
        raise InvariantViolation(f"Montgomery-Vaughan bound violated: {lhs} > {bound} * {l2}")
    return report


def thm2_spaced(points: np.ndarray, deltas: Sequence[float]) -> bool:
    """``max_j ||x_j^r - x_j^s|| / delta_j > 1`` for every pair ``r != s``."""
    pts = np.asarray(points, dtype=float)
    d = np.asarray(deltas, dtype=float)
    for r in range(len(pts) - 1):
        diff = pts[r + 1 :] - pts[r]
        dist = np.abs(diff - np.rint(diff))
        if np.any((dist / d).max(axis=1) <= 1):
            return False
    return True


def run_thm2_check(points: np.ndarray, deltas: Sequence[float], coeffs: np.ndarray, offsets=None) -> ExperimentReport:
    """Product bound for ``k``-dimensional well-spaced points.

    ``coeffs`` has shape ``(N_1, ..., N_k)``; entry ``i`` sits at
    ``n_j = offsets[j] + 1 + i_j``.
    """
    pts = np.asarray(points, dtype=float)
    c = np.asarray(coeffs, dtype=complex)
    k = c.ndim
    if pts.ndim != 2 or pts.shape[1] != k or len(deltas) != k:
        raise ValueError("points, deltas and coeffs disagree on the dimension")
    if not thm2_spaced(pts, deltas):
        raise ValueError("points do not satisfy the spacing predicate")
    offsets = [0] * k if offsets is None else list(offsets)
    vals = []
    for x in pts:
        s = c
        for j in range(k):
            ns = offsets[j] + 1 + np.arange(c.shape[j])
            t = ns * x[j]
            ph = np.exp(2j * np.pi * (t - np.rint(t)))
            s = np.tensordot(ph, s, axes=([0], [0]))
        vals.append(abs(complex(s)) ** 2)
    lhs = math.fsum(vals)
    l2 = math.fsum((np.abs(c) ** 2).ravel().tolist())
    bound = majorant_thm2_product(list(c.shape), list(deltas))
    report = ExperimentReport(
        "thm2",
        {"k": k, "R": len(pts), "N": list(c.shape), "delta": [float(d) for d in deltas]},
        lhs=lhs,
        l2=l2,
        ratio=lhs / l2 if l2 > 0 else 0.0,
        majorants={"thm2_product": bound},
        checks={"thm2_product": lhs <= bound * l2 * (1 + THEOREM_RTOL)},
    )
    if not report.ok:
        raise InvariantViolation(f"product bound violated: {lhs} > {bound} * {l2}")
    return report


# --- kernel identity --------------------------------------------------------


def tail_budget(n: int, N: int, K: int, B: float) -> float:
    """Allowed gap between the full pair sum and the alpha-sum truncated at ``K``.

    ``phi(m/2N) <= N^2/m^2``, so one coordinate's tail beyond ``K`` weighs at
    most ``2N^2/K`` while a full coordinate sums to ``pi^2 N/2``. Outside the
    cube at least one coordinate is in its tail, giving total weight at most
    ``n (2N^2/K) (pi^2 N/2)^(n-1)``. Taking ``B = sum |b|^2`` as the typical
    size of ``|sum_beta b(beta) e(alpha . beta)|^2`` (its mean over a period)
    and a safety factor of 6 gives ``3n (2N)^2/K (pi^2 N/2)^(n-1) B``.
    """
    return 3 * n * (2 * N) ** 2 / K * (math.pi**2 * N / 2) ** (n - 1) * B


def _dual_sum_grid(points: PointSet, b: np.ndarray, K: int) -> np.ndarray:
    """``F(alpha) = sum_beta b(beta) e(alpha . beta)`` on ``[-K, K]^n``."""
    alphas = np.arange(-K, K + 1, dtype=np.int64)
    mats = []
    for i in range(points.n):
        q = points.dens[:, i]
        a = points.nums[:, i]
        ang = 2 * np.pi * (((alphas[:, None] % q) * a) % q) / q
        mats.append(np.cos(ang) + 1j * np.sin(ang))
    letters = "abcdefgh"[: points.n]
    subscripts = "z," + ",".join(f"{l}z" for l in letters) + "->" + letters
    return np.einsum(subscripts, b, *mats)


@dataclass
class KernelIdentityReport:
    n: int
    N: int
    K_ext: int
    pair_sum: float
    alpha_sum: float
    box_sum: float
    tail_budget: float
    rigorous_tail_bound: float

    @property
    def identity_ok(self) -> bool:
        return abs(self.pair_sum - self.alpha_sum) <= self.tail_budget

    @property
    def positivity_ok(self) -> bool:
        return self.box_sum <= self.alpha_sum * (1 + POSITIVITY_RTOL) + 1e-300


def pair_sum(points: PointSet, b: np.ndarray, N: int) -> float:
    """``(pi^2 N/2)^n sum b(beta) conj(b(beta')) prod_i (1 - 2N ||beta_i - beta'_i||)`` over close pairs."""
    P = np.ones((len(points), len(points)))
    scale = math.pi**2 * N / 2
    for i in range(points.n):
        a, q = points.nums[:, i], points.dens[:, i]
        den = np.multiply.outer(q, q)
        r = (np.multiply.outer(a, q) - np.multiply.outer(q, a)) % den
        d = np.minimum(r, den - r) / den
        P *= scale * np.maximum(1 - 2 * N * d, 0.0)
    return float(np.real(csum(np.outer(b, np.conj(b)) * P)))


def kernel_identity_check(points: PointSet, b, N: int, K_ext: int | None = None) -> KernelIdentityReport:
    """Compare the closed pair sum with the kernel-weighted alpha-sum truncated at ``K_ext``.

    Also returns the unweighted sum over the box ``max|alpha_i| <= N``, which
    must not exceed the weighted one.
    """
    if len(points) > IDENTITY_SET_CAP:
        raise ResourceCapError(f"identity check limited to {IDENTITY_SET_CAP} points", len(points), IDENTITY_SET_CAP)
    K = 50 * N if K_ext is None else K_ext
    if K < 10 * N:
        raise ValueError("K_ext must be at least 10N")
    b = np.asarray(b, dtype=complex)
    if b.shape != (len(points),):
        raise ValueError("need one coefficient per point")
    B = math.fsum((np.abs(b) ** 2).tolist())
    n = points.n
    if len(points) == 0:
        return KernelIdentityReport(n, N, K, 0.0, 0.0, 0.0, 0.0, 0.0)
    F2 = np.abs(_dual_sum_grid(points, b, K)) ** 2
    w1 = phi_at_multiples(np.arange(-K, K + 1), N)
    W = w1
    for _ in range(n - 1):
        W = np.multiply.outer(W, w1)
    alpha_sum = math.fsum((W * F2).ravel().tolist())
    inner = (slice(K - N, K + N + 1),) * n
    box_sum = math.fsum(F2[inner].ravel().tolist())
    weight_tail = n * 2 * N * N / K * (math.pi**2 * N / 2) ** (n - 1)
    l1 = math.fsum(np.abs(b).tolist())
    return KernelIdentityReport(
        n=n,
        N=N,
        K_ext=K,
        pair_sum=pair_sum(points, b, N),
        alpha_sum=alpha_sum,
        box_sum=box_sum,
        tail_budget=tail_budget(n, N, K, B),
        rigorous_tail_bound=weight_tail * l1 * l1,
    )


# --- dyadic pieces and regression -------------------------------------------


def dyadic_decompose(X: int) -> list[tuple[int, int]]:
    """Closed ranges ``(hi/2, hi]`` starting from ``hi = X``, down to ``[1, 1]``."""
    if X < 1:
        raise ValueError("X must be >= 1")
    out = []
    hi = X
    while hi >= 1:
        lo = hi // 2 + 1
        out.append((lo, hi))
        hi = lo - 1
    return out


def slope_fit(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("xs and ys must be 1-D and of equal length")
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("slope_fit needs positive data")
    if len(np.unique(x)) < 2:
        raise ValueError("slope_fit needs at least two distinct x values")
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])
