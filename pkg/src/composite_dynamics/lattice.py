"""Diagonal enumeration of the (row, column) array of natural numbers.

The doubly indexed region families are addressed by a row ``p >= 0`` and a
column ``q >= 1``.  Cell ``(p, q)`` holds the natural number

    n = q(q-1)/2 + 1 + p*q + p(p+1)/2

so the first diagonal is ``1``, the second ``2, 3``, the third ``4, 5, 6``
and so on, with column 1 running down the ends of the diagonals.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Iterator

import numpy as np

__all__ = [
    "INT_MAX",
    "GridIndex",
    "LinearIndex",
    "grid_to_linear",
    "linear_to_grid",
    "enumerate_array",
    "iter_array",
    "cell_number",
    "cell_position",
    "cell_numbers",
    "cell_positions",
]

# Results are kept inside a signed 64-bit word so that every value this module
# hands out can be stored by a fixed-width consumer without wrapping.
INT_MAX = 2**63 - 1


def _checked(value: int) -> int:
    if value > INT_MAX:
        raise OverflowError(f"lattice value {value} exceeds the 64-bit limit")
    return value


@dataclass(frozen=True, order=True)
class GridIndex:
    p: int
    q: int

    def __post_init__(self) -> None:
        if isinstance(self.p, bool) or isinstance(self.q, bool):
            raise TypeError("grid coordinates must be integers")
        if not isinstance(self.p, int) or not isinstance(self.q, int):
            raise TypeError("grid coordinates must be integers")
        if self.p < 0:
            raise ValueError(f"row p must be >= 0, got {self.p}")
        if self.q < 1:
            raise ValueError(f"column q must be >= 1, got {self.q}")

    def __str__(self) -> str:
        return f"({self.p},{self.q})"


@dataclass(frozen=True, order=True)
class LinearIndex:
    n: int

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or not isinstance(self.n, int):
            raise TypeError("linear index must be an integer")
        if self.n < 1:
            raise ValueError(f"linear index must be >= 1, got {self.n}")

    def __int__(self) -> int:
        return self.n


def cell_number(p: int, q: int) -> int:
    return _checked(q * (q - 1) // 2 + 1 + p * q + p * (p + 1) // 2)


def cell_position(n: int) -> tuple[int, int]:
    # least r with r(r+1)/2 >= n; isqrt gives a floor estimate that is at
    # most one short
    r = (isqrt(8 * n + 1) - 1) // 2
    while r * (r + 1) // 2 < n:
        r += 1
    while r > 1 and (r - 1) * r // 2 >= n:
        r -= 1
    s = r * (r + 1) // 2 - n
    return r - s - 1, s + 1


BULK_LIMIT = 2**50  # float64 sqrt is off by at most one below this


def cell_numbers(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Vectorized :func:`cell_number` on int64 arrays."""
    p = np.asarray(p, dtype=np.int64)
    q = np.asarray(q, dtype=np.int64)
    if p.size and (p.min() < 0 or q.min() < 1 or (p + q).max() >= 2**26):
        raise ValueError("bulk cell_numbers needs p >= 0, q >= 1 and p + q < 2^26")
    return q * (q - 1) // 2 + 1 + p * q + p * (p + 1) // 2


def cell_positions(n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`cell_position` on an int64 array with ``1 <= n < 2^50``."""
    n = np.asarray(n, dtype=np.int64)
    if n.size and (n.min() < 1 or n.max() >= BULK_LIMIT):
        raise ValueError("bulk cell_positions needs 1 <= n < 2^50")
    r = ((np.sqrt(8.0 * n + 1.0) - 1.0) // 2).astype(np.int64)
    r += r * (r + 1) // 2 < n
    r -= (r - 1) * r // 2 >= n
    s = r * (r + 1) // 2 - n
    return r - s - 1, s + 1


def grid_to_linear(g: GridIndex) -> LinearIndex:
    """Position of cell ``g`` in the diagonal enumeration."""
    return LinearIndex(cell_number(g.p, g.q))


def linear_to_grid(n: LinearIndex | int) -> GridIndex:
    """Inverse of :func:`grid_to_linear`."""
    value = n.n if isinstance(n, LinearIndex) else LinearIndex(n).n
    _checked(value)
    p, q = cell_position(value)
    return GridIndex(p, q)


def iter_array() -> Iterator[tuple[LinearIndex, GridIndex]]:
    n = 1
    while True:
        yield LinearIndex(n), linear_to_grid(n)
        n += 1


def enumerate_array(count: int) -> list[tuple[LinearIndex, GridIndex]]:
    if count < 0:
        raise ValueError("count must be >= 0")
    out = []
    it = iter_array()
    for _ in range(count):
        out.append(next(it))
    return out
