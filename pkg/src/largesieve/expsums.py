"""Coefficient boxes and exponential sums over the box max|alpha_i| <= N.

Phases ``e(alpha . beta)`` are reduced modulo 1 in integer arithmetic
(``beta`` is rational with common denominator ``ord(beta)``) and only then
looked up in a table of unit complex numbers, so large ``|alpha|`` costs no
accuracy. Floating sums go through ``math.fsum`` in a fixed order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ResourceCapError
from .torus import PointSet, TorusPoint, primes_upto

DENSE_CAP = 10**7
SEED_MASK = (1 << 64) - 1

COEFF_KINDS = ("ones", "random_complex", "delta", "file")


def unit_phase(t) -> complex:
    """``exp(2 pi i t)`` with ``t`` reduced mod 1 first (exactly, for rationals)."""
    if isinstance(t, (int, Fraction)):
        r = Fraction(t) % 1
        if r > Fraction(1, 2):
            r -= 1
        x = 2 * math.pi * float(r)
    else:
        x = 2 * math.pi * (t - round(t))
    return complex(math.cos(x), math.sin(x))


def phase_table(L: int) -> np.ndarray:
    """``e(k/L)`` for ``k = 0..L-1``, each angle taken in (-pi, pi]."""
    k = np.arange(L)
    k = np.where(2 * k > L, k - L, k)
    x = 2 * np.pi * k / L
    return np.cos(x) + 1j * np.sin(x)


def csum(z: np.ndarray) -> complex:
    """Compensated sum of a complex array, independent of its memory layout."""
    z = np.asarray(z, dtype=complex).ravel()
    return complex(math.fsum(z.real.tolist()), math.fsum(z.imag.tolist()))


@dataclass
class CoeffBox:
    """Complex coefficients ``c(alpha)`` for ``alpha`` in ``[-N, N]^n``.

    Either ``values`` (dense, shape ``(2N+1,)*n``, axis ``i`` indexed by
    ``alpha_i + N``) or ``factors`` (one length-``2N+1`` vector per
    coordinate, with ``c(alpha) = prod_i factors[i][alpha_i + N]``) must be
    given. A factored box materializes its dense form only on request.
    """

    n: int
    N: int
    values: np.ndarray | None = None
    factors: tuple[np.ndarray, ...] | None = None

    def __post_init__(self) -> None:
        if self.n < 1 or self.N < 0:
            raise ValueError("need n >= 1 and N >= 0")
        m = 2 * self.N + 1
        if self.values is None and self.factors is None:
            raise ValueError("CoeffBox needs values or factors")
        if self.factors is not None:
            self.factors = tuple(np.asarray(f, dtype=complex) for f in self.factors)
            if len(self.factors) != self.n or any(f.shape != (m,) for f in self.factors):
                raise ValueError(f"expected {self.n} factors of length {m}")
        if self.values is not None:
            self.values = np.asarray(self.values, dtype=complex)
            if self.values.shape != (m,) * self.n:
                raise ValueError(f"values must have shape {(m,) * self.n}, got {self.values.shape}")

    @classmethod
    def from_factors(cls, factors: Sequence[np.ndarray]) -> "CoeffBox":
        factors = [np.asarray(f, dtype=complex) for f in factors]
        return cls(len(factors), (len(factors[0]) - 1) // 2, factors=tuple(factors))

    @property
    def rank1(self) -> bool:
        return self.factors is not None

    @property
    def size(self) -> int:
        return (2 * self.N + 1) ** self.n

    def dense(self) -> np.ndarray:
        if self.values is not None:
            return self.values
        if self.size > DENSE_CAP:
            raise ResourceCapError(
                f"dense box of {self.size} entries exceeds cap {DENSE_CAP}; keep it factored",
                predicted=self.size,
                cap=DENSE_CAP,
            )
        out = self.factors[0]
        for f in self.factors[1:]:
            out = np.multiply.outer(out, f)
        return out

    def __getitem__(self, alpha: Sequence[int]) -> complex:
        idx = tuple(a + self.N for a in alpha)
        if self.values is not None:
            return complex(self.values[idx])
        return complex(np.prod([f[i] for f, i in zip(self.factors, idx)]))

    def alphas(self) -> np.ndarray:
        return np.arange(-self.N, self.N + 1)


def _residue_indices(N: int, beta: TorusPoint) -> tuple[int, list[np.ndarray]]:
    """Per-coordinate ``alpha_i * beta_i * L mod L`` for ``alpha_i`` in [-N, N]."""
    L = beta.order
    alphas = np.arange(-N, N + 1, dtype=np.int64)
    idx = []
    for c in beta.coords:
        step = c.numerator * (L // c.denominator) % L
        idx.append((alphas % L) * step % L)
    return L, idx


def eval_expsum(c: CoeffBox, beta: TorusPoint, dense: bool = False) -> complex:
    """``sum_alpha c(alpha) e(alpha . beta)`` over the box.

    A factored box is summed as a product of ``n`` one-dimensional sums
    unless ``dense`` forces the full ``(2N+1)^n`` evaluation.
    """
    if beta.n != c.n:
        raise ValueError(f"dimension mismatch: point has {beta.n}, box has {c.n}")
    L, idx = _residue_indices(c.N, beta)
    table = phase_table(L)
    if c.rank1 and not dense:
        out = complex(1.0)
        for f, k in zip(c.factors, idx):
            out *= csum(f * table[k])
        return out
    total = idx[0]
    for i, k in enumerate(idx[1:], start=1):
        total = np.add.outer(total, k)
    total %= L
    return csum(c.dense() * table[total])


@dataclass(frozen=True)
class LhsResult:
    value: float
    point_count: int
    exact_value: int | None = None


def sieve_lhs(points: PointSet, c: CoeffBox, dense: bool = False) -> LhsResult:
    """``sum over beta in points of |S(beta)|^2``, summed in set order."""
    if points.n != c.n:
        raise ValueError(f"dimension mismatch: set has {points.n}, box has {c.n}")
    terms = [abs(eval_expsum(c, beta, dense=dense)) ** 2 for beta in points]
    return LhsResult(math.fsum(terms), len(points))


def l2_norm_sq(c: CoeffBox) -> float:
    if c.rank1:
        return math.prod(math.fsum((np.abs(f) ** 2).tolist()) for f in c.factors)
    return math.fsum((np.abs(c.values) ** 2).ravel().tolist())


def exact_lhs_prime_line(n: int, X: int, N: int) -> int:
    """Exact LHS for all-ones coefficients over the prime-line set ``T``.

    With ``M = 2N+1`` and ``r = M mod p``, the ``p - 1`` points ``a/p`` contribute
    ``p * #{(m, m'): p | m - m'} - M^2 = r (p - r)``; the ``n - 1`` zero
    coordinates contribute a factor ``M^2`` each.
    """
    if n < 1 or N < 0:
        raise ValueError("need n >= 1 and N >= 0")
    M = 2 * N + 1
    return M ** (2 * (n - 1)) * sum((M % p) * (p - M % p) for p in primes_upto(X))


def make_coeffs(n: int, N: int, kind: str = "ones", seed: int = 0, path=None) -> CoeffBox:
    """Build a coefficient box.

    ``random_complex`` draws real parts then imaginary parts, each uniform on
    [-1, 1], from numpy's PCG64 generator seeded with ``seed mod 2**64``.
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    m = 2 * N + 1
    if kind == "ones":
        return CoeffBox(n, N, factors=tuple(np.ones(m) for _ in range(n)))
    if kind == "delta":
        f = np.zeros(m)
        f[N] = 1.0
        return CoeffBox(n, N, factors=tuple(f.copy() for _ in range(n)))
    if kind == "random_complex":
        if m**n > DENSE_CAP:
            raise ResourceCapError(f"random box of {m**n} entries exceeds cap {DENSE_CAP}", m**n, DENSE_CAP)
        rng = np.random.default_rng(seed & SEED_MASK)
        shape = (m,) * n
        re = rng.uniform(-1.0, 1.0, size=shape)
        im = rng.uniform(-1.0, 1.0, size=shape)
        return CoeffBox(n, N, values=re + 1j * im)
    if kind == "file":
        if path is None:
            raise ValueError("coefficient kind 'file' needs a path")
        from .report import load_coeff_file

        return load_coeff_file(path, n=n, N=N)
    raise ValueError(f"unknown coefficient kind {kind!r}")


def twisted_coeffs(beta0: TorusPoint, N: int) -> CoeffBox:
    """``c(alpha) = e(-alpha . beta0)``: every phase cancels at ``beta0``."""
    alphas = range(-N, N + 1)
    return CoeffBox.from_factors([np.array([unit_phase(-a * b) for a in alphas]) for b in beta0.coords])
