"""The kernel phi(x) = (sin(pi x) / (2x))^2 and its periodization.

``phi`` is (pi^2/4) sinc^2, so its Fourier transform is (pi^2/4) times the
triangle ``max(1 - |s|, 0)``. Poisson summation then gives

    V(y) = sum_m phi(m / 2N) e(m y) = (pi^2 N / 2) (1 - 2N ||y||)

for ``||y|| < 1/(2N)`` and 0 otherwise. :func:`v_truncated` evaluates the
left side directly and serves as the oracle for :func:`v_closed`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

PHI0 = math.pi**2 / 4
SERIES_CUTOFF = 1e-4
CHUNK = 1 << 20


def phi(x):
    """``(sin(pi x) / (2x))^2``, with ``phi(0) = pi^2/4``. Accepts arrays."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < SERIES_CUTOFF
    xs = np.where(small, 1.0, x)
    big = (np.sin(np.pi * xs) / (2 * xs)) ** 2
    u = (np.pi * x) ** 2
    # sinc^2 = 1 - u/3 + 2u^2/45 - ...
    series = PHI0 * (1 - u / 3 + 2 * u * u / 45)
    out = np.where(small, series, big)
    return float(out) if out.ndim == 0 else out


def phi_at_multiples(m, N: int) -> np.ndarray:
    """``phi(m / 2N)`` for integer ``m``, reducing ``m mod 2N`` before the sine.

    Exact zeros at nonzero multiples of ``2N``.
    """
    m = np.asarray(m, dtype=np.int64)
    two_n = 2 * N
    r = m % two_n
    s = np.sin(np.pi * r / two_n)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (N * s / np.where(m == 0, 1, m)) ** 2
    return np.where(m == 0, PHI0, out)


def triangle(s):
    out = np.maximum(1 - np.abs(np.asarray(s, dtype=float)), 0.0)
    return float(out) if out.ndim == 0 else out


def dist_to_int(y) -> float:
    if isinstance(y, (int, Fraction)):
        r = Fraction(y) % 1
        return float(min(r, 1 - r))
    return abs(y - round(y))


def v_closed(y, N: int) -> float:
    d = dist_to_int(y)
    if 2 * N * d >= 1:
        return 0.0
    return math.pi**2 * N / 2 * (1 - 2 * N * d)


@dataclass(frozen=True)
class KernelEval:
    y: float
    N: int
    closed_value: float
    truncated_value: float | None = None
    truncation_K: int | None = None
    imag_residual: float | None = None

    @property
    def error(self) -> float | None:
        if self.truncated_value is None:
            return None
        return abs(self.truncated_value - self.closed_value)


def _phases(m: np.ndarray, y) -> np.ndarray:
    # m*y reduced mod 1 before scaling by 2 pi
    if isinstance(y, (int, Fraction)):
        y = Fraction(y) % 1
        t = (m * y.numerator) % y.denominator / y.denominator
    else:
        t = m * y
        t = t - np.rint(t)
    return 2 * np.pi * t


def v_truncated_parts(y, N: int, K: int) -> tuple[float, float]:
    """Real part and imaginary residual of ``sum_{|m| <= K} phi(m/2N) e(m y)``.

    The positive and negative halves are summed separately so that the
    imaginary residual actually tests the phase computation.
    """
    if K < 0:
        raise ValueError("K must be nonnegative")
    re_parts = [PHI0]
    im_pos, im_neg = [], []
    for lo in range(1, K + 1, CHUNK):
        m = np.arange(lo, min(lo + CHUNK, K + 1), dtype=np.int64)
        w = phi_at_multiples(m, N)
        x_pos = _phases(m, y)
        x_neg = _phases(-m, y)
        re_parts.append(float(np.sum(w * np.cos(x_pos))))
        re_parts.append(float(np.sum(w * np.cos(x_neg))))
        im_pos.append(float(np.sum(w * np.sin(x_pos))))
        im_neg.append(float(np.sum(w * np.sin(x_neg))))
    return math.fsum(re_parts), math.fsum(im_pos + im_neg)


def v_truncated(y, N: int, K: int) -> float:
    return v_truncated_parts(y, N, K)[0]


def kernel_eval(y, N: int, K: int | None = None) -> KernelEval:
    closed = v_closed(y, N)
    if K is None:
        return KernelEval(float(y), N, closed)
    re, im = v_truncated_parts(y, N, K)
    return KernelEval(float(y), N, closed, re, K, abs(im))


def truncation_bound(N: int, K: int) -> float:
    """Bound on ``|v_truncated - v_closed|``: ``phi(m/2N) <= N^2/m^2``, so the two tails sum to at most ``2N^2/K``."""
    return 2 * N * N / K if K > 0 else math.inf


def kernel_weight(alpha, N: int) -> float:
    """``prod_i phi(alpha_i / 2N)``; at least 1 on the box ``max|alpha_i| <= N``."""
    return float(np.prod(phi_at_multiples(np.asarray(alpha, dtype=np.int64).ravel(), N)))
