"""Neighbour counts ``#{beta' : ||beta - beta'|| < Y}`` and their maximum.

The point itself is always counted. Counting is brute force over all pairs;
``method="grid"`` buckets points into cells of side at least ``Y`` and only
compares neighbouring cells, giving identical counts.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .torus import PointSet, TorusPoint, distances_from_arrays, enumerate_farey_line_Tprime


@dataclass
class SpacingReport:
    n: int
    X: int
    Y: float
    m_value: int
    argmax_point: TorusPoint
    bound_value: float
    ratio: float
    per_point_counts: list[int] | None = None


def _as_float(Y) -> float:
    Y = float(Y)
    if not Y > 0:
        raise ValueError("Y must be positive")
    return Y


def neighbor_count(points: PointSet, beta: TorusPoint, Y) -> int:
    if beta not in points:
        raise ValueError(f"point {beta} is not in the set")
    return int(np.count_nonzero(points.distances_to(beta) < _as_float(Y)))


def _cells_per_axis(Y: float) -> int:
    k = math.floor(1 / Y)
    while k > 0 and Fraction(Y) * k > 1:
        k -= 1
    return k


def neighbor_counts(points: PointSet, Y, method: str = "brute") -> np.ndarray:
    """Neighbour count for every point, in set order."""
    Y = _as_float(Y)
    if method == "brute":
        return np.array([np.count_nonzero(points.distances_to(b) < Y) for b in points], dtype=np.int64)
    if method != "grid":
        raise ValueError(f"unknown method {method!r}")
    k = _cells_per_axis(Y)
    if k < 3:
        return neighbor_counts(points, Y, "brute")
    # cell side 1/k >= Y, so any pair closer than Y sits in adjacent cells
    cells = (points.nums * k) // points.dens
    buckets: dict[tuple[int, ...], list[int]] = {}
    for i, cell in enumerate(map(tuple, cells.tolist())):
        buckets.setdefault(cell, []).append(i)
    offsets = list(itertools.product((-1, 0, 1), repeat=points.n))
    out = np.empty(len(points), dtype=np.int64)
    for i, beta in enumerate(points):
        cell = cells[i]
        cand = []
        for off in offsets:
            cand.extend(buckets.get(tuple(((cell + off) % k).tolist()), ()))
        cand = np.array(cand, dtype=np.int64)
        d = distances_from_arrays(points.nums[cand], points.dens[cand], beta)
        out[i] = np.count_nonzero(d < Y)
    return out


def m_of(points: PointSet, Y, method: str = "brute") -> SpacingReport:
    """Largest neighbour count over the set; ties go to the earliest point."""
    if len(points) == 0:
        raise ValueError("m_of needs a nonempty set")
    counts = neighbor_counts(points, Y, method)
    i = int(np.argmax(counts))
    m = int(counts[i])
    bound = lemma2_bound(points.n, points.X, float(Y))
    return SpacingReport(
        n=points.n,
        X=points.X,
        Y=float(Y),
        m_value=m,
        argmax_point=points[i],
        bound_value=bound,
        ratio=m / bound,
        per_point_counts=np.bincount(counts).tolist(),
    )


def lemma2_bound(n: int, X: int, Y: float) -> float:
    """``X^(n+1) Y^n + X^2 Y + 1``, without the ``X^eps`` factor."""
    return X ** (n + 1) * Y**n + X**2 * Y + 1


def farey_line_max_count(n: int, X: int, Y, method: str = "brute") -> int:
    return m_of(enumerate_farey_line_Tprime(n, X), Y, method).m_value


def min_spacing(points: PointSet) -> float:
    if len(points) < 2:
        raise ValueError("min_spacing needs at least two points")
    best = math.inf
    for i in range(len(points) - 1):
        d = distances_from_arrays(points.nums[i + 1 :], points.dens[i + 1 :], points[i])
        best = min(best, float(d.min()))
    return best
