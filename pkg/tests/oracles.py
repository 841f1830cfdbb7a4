"""Independent reference implementations used by the tests.

None of these import the code under test's algorithms: the lattice is walked
diagonal by diagonal, the modulus crossing is found by sampling circles with
cmath, and separations are measured on sampled boundary points.
"""

from __future__ import annotations

import cmath
import math
from itertools import count, islice

import numpy as np


def diagonal_walk():
    """Yield ``(n, p, q)`` in counting order: diagonal ``p + q = d`` holds p = 0..d-1."""
    n = 0
    for d in count(1):
        for p in range(d):
            n += 1
            yield n, p, d - p


def walk_table(limit: int) -> dict[int, tuple[int, int]]:
    return {n: (p, q) for n, p, q in islice(diagonal_walk(), limit)}


def circle_max_deviation(c: int, r: float, samples: int = 20_000) -> float:
    """Max of ``|exp(w) - c|`` over ``samples`` points of the circle ``|w - log c| = r``."""
    w0 = cmath.log(complex(c, 0.0))  # principal branch: arg in (-pi, pi]
    best = 0.0
    for j in range(samples):
        w = w0 + r * cmath.exp(2j * math.pi * j / samples)
        best = max(best, abs(cmath.exp(w) - c))
    return best


def crossing_radius(c: int, samples: int = 20_000, tol: float = 1e-10) -> float:
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if circle_max_deviation(c, mid, samples) < 0.5:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def sampled_layout_gap(max_k: int, per_unit: int = 50, height: float = 6.0) -> float:
    """Smallest distance between boundary samples of different pieces of the layout."""
    circle = np.exp(2j * np.pi * np.arange(720) / 720)
    ys = np.linspace(1.0, height, int((height - 1) * per_unit) + 1)
    line = np.linspace(-height, height, int(2 * height * per_unit) + 1)
    pieces = [2 + circle]
    for k in range(1, max_k + 1):
        for x in (4 * k + 2, -(4 * k + 2)):
            pieces.append(np.concatenate([x + circle, x + 1j * ys, x - 1j * ys]))
        for x in (4 * k, -4 * k):
            pieces.append(x + 1j * line)
    best = math.inf
    for i, a in enumerate(pieces):
        for b in pieces[i + 1:]:
            best = min(best, float(np.min(np.abs(a[:, None] - b[None, :]))))
    return best


def simulate(step, state, steps: int):
    """Plain orbit list of a step function on hashable states."""
    out = [state]
    for _ in range(steps):
        state = step(state)
        out.append(state)
    return out
