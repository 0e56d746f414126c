"""Rational points on the torus R^n/Z^n and the point families built from them.

Coordinates are stdlib ``fractions.Fraction`` values reduced into [0, 1).
A point's additive order is the lcm of its coordinate denominators, so the
order-bounded families can be enumerated with plain denominator loops.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ResourceCapError

DEFAULT_CAP = 10**7

KINDS = ("order_ball", "S", "prime_line_T", "farey_line_Tprime", "custom")

ZERO = Fraction(0)


def make_fraction(a: int, q: int) -> Fraction:
    """Reduced representative of ``a/q`` modulo 1, in [0, 1)."""
    if q == 0:
        raise ValueError("denominator must be nonzero")
    if q < 0:
        a, q = -a, -q
    return Fraction(a % q, q)


@dataclass(frozen=True)
class TorusPoint:
    coords: tuple[Fraction, ...]
    order: int = field(init=False, compare=False)

    def __post_init__(self) -> None:
        coords = tuple(self.coords)
        if not coords:
            raise ValueError("a torus point needs at least one coordinate")
        for c in coords:
            if not isinstance(c, Fraction) or not 0 <= c < 1:
                raise ValueError(f"coordinate {c!r} is not a reduced residue in [0, 1)")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "order", math.lcm(*(c.denominator for c in coords)))

    @classmethod
    def of(cls, *pairs: tuple[int, int]) -> "TorusPoint":
        """Build from ``(a, q)`` pairs, reducing each mod 1."""
        return cls(tuple(make_fraction(a, q) for a, q in pairs))

    @classmethod
    def parse(cls, text: str) -> "TorusPoint":
        """Parse ``"a1/q1,...,an/qn"``; a bare integer means ``a/1``."""
        coords = []
        for part in text.split(","):
            part = part.strip()
            if "/" in part:
                a, q = part.split("/")
                coords.append(make_fraction(int(a), int(q)))
            else:
                coords.append(make_fraction(int(part), 1))
        return cls(tuple(coords))

    @property
    def n(self) -> int:
        return len(self.coords)

    def __str__(self) -> str:
        return ",".join(f"{c.numerator}/{c.denominator}" for c in self.coords)


def order(p: TorusPoint) -> int:
    return p.order


def _coord_distance(d: Fraction) -> Fraction:
    d = d % 1
    return min(d, 1 - d)


def torus_distance_exact(x: TorusPoint, y: TorusPoint) -> Fraction:
    if x.n != y.n:
        raise ValueError(f"dimension mismatch: {x.n} vs {y.n}")
    return max(_coord_distance(a - b) for a, b in zip(x.coords, y.coords))


def torus_distance(x: TorusPoint, y: TorusPoint) -> float:
    """Max over coordinates of the distance to the nearest integer of ``x - y``."""
    return float(torus_distance_exact(x, y))


# --- arithmetic helpers -----------------------------------------------------


def primes_upto(X: int) -> list[int]:
    if X < 2:
        return []
    flags = np.ones(X + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(X) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).tolist()


def _is_prime(m: int) -> bool:
    return m >= 2 and all(m % d for d in range(2, math.isqrt(m) + 1))


def totients_upto(X: int) -> np.ndarray:
    """Euler phi for 0..X (phi[0] = 0)."""
    phi = np.arange(X + 1, dtype=np.int64)
    for p in primes_upto(X):
        phi[p::p] -= phi[p::p] // p
    return phi


def jordan_totient(k: int, L: int) -> int:
    """Number of points of exact order ``L`` on the k-torus."""
    if k == 0:
        return 1 if L == 1 else 0
    num = L**k
    m = L
    p = 2
    while p * p <= m:
        if m % p == 0:
            num = num // p**k * (p**k - 1)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        num = num // m**k * (m**k - 1)
    return num


def _s_q1_range(X: int) -> range:
    # Closed interval [ceil(X/2), X]; q1 = 1 (zero first coordinate) is never in S.
    return range(max(2, -(-X // 2)), X + 1)


def predicted_count(kind: str, n: int, X: int) -> int:
    """Exact size of a point family, computed without enumerating it."""
    if kind == "order_ball":
        return sum(jordan_totient(n, L) for L in range(1, X + 1))
    if kind == "S":
        rest = [jordan_totient(n - 1, L) for L in range(X + 1)]
        phi = totients_upto(X)
        total = 0
        for q1 in _s_q1_range(X):
            total += int(phi[q1]) * sum(rest[L] for L in range(1, X + 1) if math.lcm(q1, L) <= X)
        return total
    if kind == "prime_line_T":
        return sum(p - 1 for p in primes_upto(X))
    if kind == "farey_line_Tprime":
        return 1 + int(totients_upto(X)[2:].sum())
    raise ValueError(f"no count formula for kind {kind!r}")


# --- point sets -------------------------------------------------------------


def in_family(kind: str, n: int, X: int, p: TorusPoint) -> bool:
    """Membership predicate for each named family."""
    if p.n != n:
        return False
    if kind == "custom":
        return True
    if p.order > X:
        return False
    first = p.coords[0].denominator
    rest_zero = all(c == ZERO for c in p.coords[1:])
    if kind == "order_ball":
        return True
    if kind == "S":
        return first in _s_q1_range(X)
    if kind == "prime_line_T":
        return rest_zero and _is_prime(first)
    if kind == "farey_line_Tprime":
        return rest_zero
    raise ValueError(f"unknown point-set kind {kind!r}")


@dataclass
class PointSet:
    n: int
    kind: str
    X: int
    points: list[TorusPoint]

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown point-set kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("dimension must be at least 1")
        for p in self.points:
            if p.n != self.n:
                raise ValueError(f"point {p} has dimension {p.n}, expected {self.n}")
        if len(set(self.points)) != len(self.points):
            raise ValueError("point set contains duplicate residues")

    @classmethod
    def custom(cls, points: Iterable[TorusPoint]) -> "PointSet":
        points = list(points)
        if not points:
            raise ValueError("custom point set needs at least one point to fix the dimension")
        return cls(points[0].n, "custom", max(p.order for p in points), points)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[TorusPoint]:
        return iter(self.points)

    def __getitem__(self, i: int) -> TorusPoint:
        return self.points[i]

    @cached_property
    def _index(self) -> dict[TorusPoint, int]:
        return {p: i for i, p in enumerate(self.points)}

    def index(self, p: TorusPoint) -> int:
        try:
            return self._index[p]
        except KeyError:
            raise ValueError(f"point {p} is not in the set") from None

    def __contains__(self, p: object) -> bool:
        return p in self._index

    def satisfies_predicate(self, p: TorusPoint) -> bool:
        return in_family(self.kind, self.n, self.X, p)

    @cached_property
    def nums(self) -> np.ndarray:
        """Coordinate numerators, shape ``(len, n)``, int64."""
        return np.array([[c.numerator for c in p.coords] for p in self.points], dtype=np.int64).reshape(-1, self.n)

    @cached_property
    def dens(self) -> np.ndarray:
        return np.array([[c.denominator for c in p.coords] for p in self.points], dtype=np.int64).reshape(-1, self.n)

    def distances_to(self, beta: TorusPoint) -> np.ndarray:
        """Torus distance from ``beta`` to every point, in set order."""
        if beta.n != self.n:
            raise ValueError(f"dimension mismatch: {beta.n} vs {self.n}")
        return distances_from_arrays(self.nums, self.dens, beta)

    def split_by_q1(self, ranges: Sequence[tuple[int, int]]) -> list["PointSet"]:
        """Partition by first-coordinate denominator into the given closed ranges."""
        parts = []
        for lo, hi in ranges:
            pts = [p for p in self.points if lo <= p.coords[0].denominator <= hi]
            parts.append(PointSet(self.n, "custom", self.X, pts))
        return parts


def distances_from_arrays(nums: np.ndarray, dens: np.ndarray, beta: TorusPoint) -> np.ndarray:
    """Torus distances from ``beta`` to the rows of ``nums/dens``.

    Each coordinate distance is an exact rational ``r/(q q')`` rounded once
    to float, so the result agrees with :func:`torus_distance` bit for bit.
    """
    if len(nums) == 0:
        return np.zeros(0)
    a = np.array([c.numerator for c in beta.coords], dtype=np.int64)
    q = np.array([c.denominator for c in beta.coords], dtype=np.int64)
    den = dens * q
    r = (nums * q - a * dens) % den
    return (np.minimum(r, den - r) / den).max(axis=1)


# --- enumeration ------------------------------------------------------------


def _check_cap(kind: str, n: int, X: int, cap: int | None) -> None:
    cap = DEFAULT_CAP if cap is None else cap
    predicted = predicted_count(kind, n, X)
    if predicted > cap:
        raise ResourceCapError(
            f"{kind}(n={n}, X={X}) would have {predicted} points, above the cap of {cap}",
            predicted=predicted,
            cap=cap,
        )


def _residues(X: int) -> dict[int, list[Fraction]]:
    return {q: [Fraction(a, q) for a in range(q) if math.gcd(a, q) == 1] for q in range(1, X + 1)}


def _enumerate(n: int, X: int, q1_values: Iterable[int]) -> list[TorusPoint]:
    # Lexicographic in (q1, a1, q2, a2, ...).
    res = _residues(X)
    out: list[TorusPoint] = []

    def extend(prefix: list[Fraction], L: int) -> None:
        if len(prefix) == n:
            out.append(TorusPoint(tuple(prefix)))
            return
        for q in range(1, X + 1):
            L2 = L * q // math.gcd(L, q)
            if L2 > X:
                continue
            for f in res[q]:
                prefix.append(f)
                extend(prefix, L2)
                prefix.pop()

    for q1 in q1_values:
        for f in res[q1]:
            extend([f], q1)
    return out


def _check_params(n: int, X: int) -> None:
    if n < 1:
        raise ValueError("dimension n must be >= 1")
    if X < 0:
        raise ValueError("X must be nonnegative")


def enumerate_order_ball(n: int, X: int, cap: int | None = None) -> PointSet:
    """All points with additive order at most ``X``."""
    _check_params(n, X)
    _check_cap("order_ball", n, X, cap)
    return PointSet(n, "order_ball", X, _enumerate(n, X, range(1, X + 1)))


def enumerate_S(n: int, X: int, cap: int | None = None) -> PointSet:
    """Points of order at most ``X`` whose first denominator lies in [X/2, X]."""
    _check_params(n, X)
    if X < 2:
        return PointSet(n, "S", X, [])
    _check_cap("S", n, X, cap)
    return PointSet(n, "S", X, _enumerate(n, X, _s_q1_range(X)))


def enumerate_prime_line_T(n: int, X: int) -> PointSet:
    _check_params(n, X)
    zeros = (ZERO,) * (n - 1)
    pts = [TorusPoint((Fraction(a, p),) + zeros) for p in primes_upto(X) for a in range(1, p)]
    return PointSet(n, "prime_line_T", X, pts)


def enumerate_farey_line_Tprime(n: int, X: int) -> PointSet:
    _check_params(n, X)
    zeros = (ZERO,) * (n - 1)
    pts = [TorusPoint((f,) + zeros) for fs in _residues(X).values() for f in fs]
    return PointSet(n, "farey_line_Tprime", X, pts)


def enumerate_set(kind: str, n: int, X: int, cap: int | None = None) -> PointSet:
    if kind == "order_ball":
        return enumerate_order_ball(n, X, cap)
    if kind == "S":
        return enumerate_S(n, X, cap)
    if kind == "prime_line_T":
        return enumerate_prime_line_T(n, X)
    if kind == "farey_line_Tprime":
        return enumerate_farey_line_Tprime(n, X)
    raise ValueError(f"cannot enumerate kind {kind!r}")
