"""Best constants of a bilinear form and of its dual.

For a complex matrix ``T`` the least ``D`` with
``sum_m |sum_n a_n t_mn|^2 <= D sum_n |a_n|^2`` is the top eigenvalue of
``T^H T``; the dual inequality uses ``T T^H``. Both equal the squared
spectral norm, which is what the duality principle amounts to.
"""

from __future__ import annotations

import logging

import numpy as np

from .errors import ConvergenceError
from .expsums import phase_table
from .torus import PointSet

logger = logging.getLogger(__name__)

MAX_ITER = 100_000
TINY = 1e-300


def as_complex_matrix(T) -> np.ndarray:
    T = np.asarray(T, dtype=complex)
    if T.ndim == 1:
        T = T.reshape(1, -1)
    if T.ndim != 2 or 0 in T.shape:
        raise ValueError(f"expected a nonempty 2-D matrix, got shape {T.shape}")
    if not np.all(np.isfinite(T)):
        raise ValueError("matrix has non-finite entries")
    return T


def _seed_vector(k: int) -> np.ndarray:
    j = np.arange(k)
    return np.ones(k, dtype=complex) + 1e-3 * (np.cos(1.0 + j) + 1j * np.sin(2.0 + 3.0 * j))


def forward_constant(T, tol: float = 1e-12, max_iter: int = MAX_ITER) -> float:
    """Least ``D`` with ``||T a||^2 <= D ||a||^2``, by power iteration on ``T^H T``.

    Iteration stops once the Rayleigh quotient's relative change, divided
    by ``1 - q`` for the observed contraction ratio ``q`` of successive
    changes, drops below ``tol``. That quotient estimates the remaining
    error rather than just the last step.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    T = as_complex_matrix(T)
    x = _seed_vector(T.shape[1])
    x /= np.linalg.norm(x)
    rho_prev = None
    delta_prev = None
    for it in range(max_iter):
        y = T @ x
        rho = float(np.vdot(y, y).real)
        if rho <= TINY:
            return 0.0
        x = T.conj().T @ y
        x /= np.linalg.norm(x)
        if rho_prev is not None:
            delta = abs(rho - rho_prev)
            q = 0.0
            if delta_prev:
                q = min(delta / delta_prev, 0.999999)
            if delta <= tol * rho * (1 - q):
                logger.debug("power iteration converged after %d steps", it + 1)
                return rho
            delta_prev = delta
        rho_prev = rho
    raise ConvergenceError(f"power iteration did not converge in {max_iter} iterations")


def dual_constant(T, tol: float = 1e-12, max_iter: int = MAX_ITER) -> float:
    return forward_constant(as_complex_matrix(T).conj().T, tol, max_iter)


def duality_gap(T, tol: float = 1e-12) -> float:
    f = forward_constant(T, tol)
    d = dual_constant(T, tol)
    return abs(f - d) / max(f, TINY)


def random_complex_matrix(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def sieve_matrix(points: PointSet, N: int) -> np.ndarray:
    """Rows ``beta`` in set order, columns ``alpha`` in C order over the box; entry ``e(alpha . beta)``."""
    alphas = np.arange(-N, N + 1, dtype=np.int64)
    grids = np.meshgrid(*([alphas] * points.n), indexing="ij")
    flat = [g.ravel() for g in grids]
    rows = []
    for beta in points:
        L = beta.order
        k = np.zeros_like(flat[0])
        for c, a in zip(beta.coords, flat):
            k = (k + (a % L) * (c.numerator * (L // c.denominator) % L)) % L
        rows.append(phase_table(L)[k])
    return np.array(rows).reshape(len(points), -1)
