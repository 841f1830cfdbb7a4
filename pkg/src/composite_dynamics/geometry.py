"""Regions of the approximation set and structural checks on the family.

The set is built from the closed disk ``G0 = {|z - 2| <= 1}``, the disks
``G_k`` centred at ``4k+2`` and ``B_k`` centred at ``-(4k+2)`` (each carrying
two vertical rays ``|Im z| >= 1`` along its centre line), and the vertical
lines ``L_k: Re z = 4k`` and ``M_k: Re z = -4k``.

Distances between pieces are computed exactly where they are rational.  The
flood-fill checks in :func:`verify_structure` are a reproducible discrete
witness, not a proof: they record the grid step and window they ran on.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Union

import numpy as np
from scipy import ndimage

from .lattice import cell_number, cell_position

__all__ = [
    "BASE",
    "GEOMETRY_FAMILIES",
    "Region",
    "Disk",
    "Ray",
    "VLine",
    "HalfPlane",
    "CarlemanFamily",
    "StructureCertificate",
    "STANDARD_FAMILY",
    "center",
    "contains",
    "min_separation",
    "verify_structure",
]

BASE = "BASE"
GEOMETRY_FAMILIES = ("BASE", "G", "B", "L", "M")
_FAMILY_ORDER = {name: i for i, name in enumerate(GEOMETRY_FAMILIES)}

Number = Union[Fraction, float]


@dataclass(frozen=True)
class Region:
    """One symbolic piece of the set.

    ``family`` is ``"BASE"`` (the disk G0 lumped with every line), ``"G"`` or
    ``"B"`` for the disks with rays, or ``"L"``/``"M"`` for single lines.
    ``index`` is the linear index ``k >= 1``; grid-mode schedules read it
    through the diagonal bijection.
    """

    family: str
    index: int = 0

    def __post_init__(self) -> None:
        if self.family not in _FAMILY_ORDER:
            raise ValueError(f"unknown region family {self.family!r}")
        if self.family == BASE:
            if self.index != 0:
                raise ValueError("BASE carries no index")
        elif isinstance(self.index, bool) or not isinstance(self.index, int) or self.index < 1:
            raise ValueError(f"{self.family} index must be an integer >= 1, got {self.index!r}")

    @classmethod
    def base(cls) -> "Region":
        return cls(BASE)

    @classmethod
    def g(cls, k: int) -> "Region":
        return cls("G", k)

    @classmethod
    def b(cls, k: int) -> "Region":
        return cls("B", k)

    @classmethod
    def grid(cls, family: str, p: int, q: int) -> "Region":
        if p < 0 or q < 1:
            raise ValueError(f"grid address ({p},{q}) outside p >= 0, q >= 1")
        return cls(family, cell_number(p, q))

    @property
    def is_base(self) -> bool:
        return self.family == BASE

    @property
    def cell(self) -> tuple[int, int]:
        """Grid address ``(p, q)`` of a G or B disk."""
        if self.family not in ("G", "B"):
            raise ValueError(f"{self} has no grid address")
        return cell_position(self.index)

    def sort_key(self) -> tuple[int, int]:
        return (_FAMILY_ORDER[self.family], self.index)

    def __lt__(self, other: "Region") -> bool:
        return self.sort_key() < other.sort_key()

    def label(self, mode: str = "linear") -> str:
        if self.family == BASE:
            return BASE
        if mode == "grid" and self.family in ("G", "B"):
            p, q = self.cell
            return f"{self.family}({p},{q})"
        return f"{self.family}{self.index}"

    def __str__(self) -> str:
        return self.label()

    @classmethod
    def parse(cls, text: str) -> "Region":
        """Read ``BASE``, ``G3``, ``B[4]``, ``G(0,2)`` or ``B[1,3]``."""
        s = text.strip().replace(" ", "")
        if s.upper() in ("BASE", "G0"):
            return cls.base()
        m = re.fullmatch(r"([GBLM])(?:(\d+)|[\[(](\d+)[\])]|[\[(](\d+),(\d+)[\])])", s, re.IGNORECASE)
        if not m:
            raise ValueError(f"cannot parse region {text!r}")
        fam = m.group(1).upper()
        if m.group(4) is not None:
            if fam not in ("G", "B"):
                raise ValueError(f"only G and B regions have grid addresses: {text!r}")
            return cls.grid(fam, int(m.group(4)), int(m.group(5)))
        return cls(fam, int(m.group(2) or m.group(3)))


def center(r: Region) -> int:
    """Centre of the disk part of ``r``: ``4k+2`` for G, ``-(4k+2)`` for B, 2 for BASE."""
    if r.family == BASE:
        return 2
    if r.family == "G":
        return 4 * r.index + 2
    if r.family == "B":
        return -(4 * r.index + 2)
    raise ValueError(f"line {r} has no centre")


def contains(r: Region, z: complex) -> bool:
    z = complex(z)
    x, y = z.real, z.imag
    if r.family == "L":
        return x == 4 * r.index
    if r.family == "M":
        return x == -4 * r.index
    c = center(r)
    if abs(z - c) <= 1:
        return True
    if r.family == BASE:
        # G0 together with every line L_k, M_k
        return x != 0 and x == int(x) and int(x) % 4 == 0
    return x == c and abs(y) >= 1


# -- primitives ---------------------------------------------------------------


@dataclass(frozen=True)
class Disk:
    center: Fraction
    radius: Fraction


@dataclass(frozen=True)
class Ray:
    """Vertical ray at ``Re z = x``: ``Im z >= start`` (up) or ``<= -start``."""

    x: Fraction
    start: Fraction
    up: bool


@dataclass(frozen=True)
class VLine:
    x: Fraction


@dataclass(frozen=True)
class HalfPlane:
    """``Im z >= level``; only used by broken fixtures."""

    level: Fraction


Primitive = Union[Disk, Ray, VLine, HalfPlane]


def _exact_sqrt(value: Fraction) -> Number:
    num, den = value.numerator, value.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return math.sqrt(value)


def _gap(a: Primitive, b: Primitive) -> Number:
    """Signed separation between two primitives; ``<= 0`` means they meet."""
    if isinstance(b, Disk) and not isinstance(a, Disk):
        a, b = b, a
    if isinstance(a, Disk):
        if isinstance(b, Disk):
            return abs(a.center - b.center) - a.radius - b.radius
        if isinstance(b, VLine):
            return abs(a.center - b.x) - a.radius
        if isinstance(b, Ray):
            return _exact_sqrt((a.center - b.x) ** 2 + b.start**2) - a.radius
        if isinstance(b, HalfPlane):
            return b.level - a.radius
    if isinstance(b, HalfPlane) and not isinstance(a, HalfPlane):
        a, b = b, a
    if isinstance(a, HalfPlane):
        if isinstance(b, HalfPlane):
            return Fraction(0)
        if isinstance(b, VLine) or (isinstance(b, Ray) and b.up):
            return Fraction(0)
        return a.level + b.start
    # vertical lines and rays
    dx = abs(a.x - b.x)
    if dx > 0:
        return dx
    if isinstance(a, Ray) and isinstance(b, Ray) and a.up != b.up:
        return a.start + b.start
    return Fraction(0)


@dataclass(frozen=True)
class Piece:
    label: str
    parts: tuple[Primitive, ...]
    bounded_interior: bool = True
    interior_diameter: float = 0.0


@dataclass(frozen=True)
class CarlemanFamily:
    """The rectilinear family of disks, rays and lines.

    The defaults describe the construction used by every built-in schedule;
    the other fields exist for deliberately broken fixtures.
    """

    radius: Fraction = Fraction(1)
    ray_start: Fraction = Fraction(1)
    g_shape: str = "disk"  # "disk" | "half_plane"
    extra_disks: tuple[tuple[Fraction, Fraction], ...] = ()
    half_plane_level: Fraction = Fraction(2)

    def __post_init__(self) -> None:
        if self.g_shape not in ("disk", "half_plane"):
            raise ValueError(f"unknown g_shape {self.g_shape!r}")
        object.__setattr__(self, "radius", Fraction(self.radius))
        object.__setattr__(self, "ray_start", Fraction(self.ray_start))

    def _disk_piece(self, label: str, c: int) -> Piece:
        c = Fraction(c)
        return Piece(
            label,
            (Disk(c, self.radius), Ray(c, self.ray_start, True), Ray(c, self.ray_start, False)),
            True,
            float(2 * self.radius),
        )

    def pieces(self, max_k: int) -> list[Piece]:
        out = [Piece("G0", (Disk(Fraction(2), self.radius),), True, float(2 * self.radius))]
        if self.g_shape == "half_plane":
            out.append(Piece("H", (HalfPlane(self.half_plane_level),), False, math.inf))
        for k in range(1, max_k + 1):
            if self.g_shape == "disk":
                out.append(self._disk_piece(f"G{k}", 4 * k + 2))
            out.append(self._disk_piece(f"B{k}", -(4 * k + 2)))
            out.append(Piece(f"L{k}", (VLine(Fraction(4 * k)),), True, 0.0))
            out.append(Piece(f"M{k}", (VLine(Fraction(-4 * k)),), True, 0.0))
        for i, (c, r) in enumerate(self.extra_disks):
            out.append(Piece(f"X{i + 1}", (Disk(Fraction(c), Fraction(r)),), True, float(2 * Fraction(r))))
        return out


STANDARD_FAMILY = CarlemanFamily()


def _piece_gap(a: Piece, b: Piece) -> Number:
    return min(_gap(pa, pb) for pa in a.parts for pb in b.parts)


def _closest_pair(family: CarlemanFamily, max_k: int) -> tuple[Number, str, str]:
    pieces = family.pieces(max_k)
    best: tuple[Number, str, str] | None = None
    for i, a in enumerate(pieces):
        for b in pieces[i + 1:]:
            gap = _piece_gap(a, b)
            if best is None or gap < best[0]:
                best = (gap, a.label, b.label)
    assert best is not None
    return best


def min_separation(family: CarlemanFamily, max_k: int) -> Number:
    """Smallest distance between two distinct pieces with index <= ``max_k``.

    Exact (a :class:`~fractions.Fraction`) whenever the minimum is rational.
    Values ``<= 0`` mean two pieces touch or overlap.
    """
    if max_k < 1:
        raise ValueError("max_k must be >= 1")
    return _closest_pair(family, max_k)[0]


# -- discrete structure witness -----------------------------------------------


@dataclass
class StructureCertificate:
    window: tuple[float, float, float, float]
    grid_step: float
    shape: tuple[int, int]
    condition_i: bool
    condition_i_witness: dict
    condition_ii: bool
    condition_ii_note: list[dict]
    condition_iii: bool
    condition_iii_bound: float
    condition_iii_witness: dict
    min_gap: Number
    closest_pair: tuple[str, str]
    disjoint: bool
    clipped_rays: int
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def status(self) -> str:
        return "WITNESSED" if self.passed else "FAILED"

    def to_dict(self) -> dict:
        gap = self.min_gap
        return {
            "status": self.status,
            "window": list(self.window),
            "grid_step": self.grid_step,
            "grid_shape": list(self.shape),
            "condition_i": {"passed": self.condition_i, **self.condition_i_witness},
            "condition_ii": {"passed": self.condition_ii, "rings": self.condition_ii_note},
            "condition_iii": {
                "passed": self.condition_iii,
                "max_interior_diameter": None if math.isinf(self.condition_iii_bound) else self.condition_iii_bound,
                **self.condition_iii_witness,
            },
            "min_gap": str(gap) if isinstance(gap, Fraction) else gap,
            "closest_pair": list(self.closest_pair),
            "disjoint": self.disjoint,
            "clipped_rays": self.clipped_rays,
            "failures": list(self.failures),
        }


def _rasterize(pieces: Iterable[Piece], xs: np.ndarray, ys: np.ndarray, h: float):
    """Cells meeting the set, and cells lying wholly in its interior."""
    ny, nx = len(ys), len(xs)
    solid = np.zeros((ny, nx), dtype=bool)
    inner = np.zeros((ny, nx), dtype=bool)
    clipped = 0
    X = xs[None, :]
    Y = ys[:, None]
    for piece in pieces:
        for prim in piece.parts:
            if isinstance(prim, VLine):
                solid[:, np.abs(xs - float(prim.x)) <= h] = True
            elif isinstance(prim, Ray):
                cols = np.abs(xs - float(prim.x)) <= h
                if not cols.any():
                    continue
                clipped += 1
                if prim.up:
                    rows = ys + h >= float(prim.start)
                else:
                    rows = ys - h <= -float(prim.start)
                solid[np.ix_(rows, cols)] = True
            elif isinstance(prim, HalfPlane):
                solid[ys + h >= float(prim.level), :] = True
                inner[ys - h >= float(prim.level), :] = True
            else:
                c, r = float(prim.center), float(prim.radius)
                dx = np.maximum(np.abs(X - c) - h, 0.0)
                dy = np.maximum(np.abs(Y) - h, 0.0)
                solid |= dx**2 + dy**2 <= r * r
                fx = np.abs(X - c) + h
                fy = np.abs(Y) + h
                inner |= fx**2 + fy**2 <= r * r
    return solid, inner, clipped


def _connected_to_infinity(free: np.ndarray) -> np.ndarray:
    """Mask of free cells joined to a virtual node at infinity.

    The node is a one-cell free border around the window, so every free
    boundary cell is adjacent to it.
    """
    padded = np.pad(free, 1, constant_values=True)
    labels, _ = ndimage.label(padded)
    reach = labels == labels[0, 0]
    return reach[1:-1, 1:-1] & free


def verify_structure(
    family: CarlemanFamily = STANDARD_FAMILY,
    window: float | tuple[float, float, float, float] = 30.0,
    grid_step: float = 0.1,
    ring_step: float = 5.0,
    ring_margin: float = 2.0,
) -> StructureCertificate:
    """Discrete witness for the three conditions on the complement of the set.

    (i) every complement cell reaches the node at infinity; (ii) for each
    ring ``||z||_inf >= R`` every complement cell in the ring reaches infinity
    without leaving ``||z||_inf >= R - ring_margin``; (iii) every interior
    component is bounded, with the exact diameter taken from the piece
    description; the raster only confirms that no unclipped interior
    component is wider than that bound.  A failed witness marks the certificate FAILED.
    """
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    if isinstance(window, (int, float)):
        box = (-float(window), float(window), -float(window), float(window))
    else:
        box = tuple(float(v) for v in window)
    xmin, xmax, ymin, ymax = box
    if xmin > -20 or xmax < 20 or ymin > -20 or ymax < 20:
        raise ValueError("window must cover at least [-20, 20]^2")

    nx = int(round((xmax - xmin) / grid_step))
    ny = int(round((ymax - ymin) / grid_step))
    h = grid_step / 2
    xs = xmin + h + grid_step * np.arange(nx)
    ys = ymin + h + grid_step * np.arange(ny)

    extent = max(abs(xmin), abs(xmax))
    max_k = int(math.ceil(extent / 4)) + 1
    pieces = family.pieces(max_k)
    solid, inner, clipped = _rasterize(pieces, xs, ys, h)
    free = ~solid
    failures: list[str] = []

    reach = _connected_to_infinity(free)
    stranded = int(np.count_nonzero(free & ~reach))
    cond_i = stranded == 0
    if not cond_i:
        failures.append(f"condition (i): {stranded} complement cells cut off from infinity")
    cond_i_witness = {"free_cells": int(free.sum()), "stranded_cells": stranded, "components": 1 if cond_i else None}

    norm = np.maximum(np.abs(xs)[None, :], np.abs(ys)[:, None])
    half = min(extent, max(abs(ymin), abs(ymax)))
    rings = []
    radius = ring_step
    cond_ii = True
    while radius < half:
        allowed = free & (norm >= radius - ring_margin)
        ring_reach = _connected_to_infinity(allowed)
        target = free & (norm >= radius)
        bad = int(np.count_nonzero(target & ~ring_reach))
        rings.append({"radius": radius, "cells": int(target.sum()), "stranded": bad})
        if bad:
            cond_ii = False
        radius += ring_step
    if not cond_ii:
        failures.append("condition (ii): some ring is not connected to infinity")

    bound = max((p.interior_diameter for p in pieces), default=0.0)
    labels, count = ndimage.label(inner)
    edge = np.unique(np.concatenate([labels[0], labels[-1], labels[:, 0], labels[:, -1]]))
    clipped_components = set(int(v) for v in edge if v)
    widest = 0.0
    for lab, sl in enumerate(ndimage.find_objects(labels), start=1):
        if sl is None or lab in clipped_components:
            continue
        span = max(sl[0].stop - sl[0].start, sl[1].stop - sl[1].start) * grid_step
        widest = max(widest, span)
    cond_iii = math.isfinite(bound) and all(p.bounded_interior for p in pieces) and widest <= bound
    if not cond_iii:
        failures.append("condition (iii): an interior component is unbounded")
    cond_iii_witness = {
        "interior_components": int(count),
        "clipped_by_window": len(clipped_components),
        "widest_unclipped": round(widest, 12),
    }

    gap, a, b = _closest_pair(family, max_k)
    disjoint = gap > 0
    if not disjoint:
        failures.append(f"disjointness: {a} and {b} are {gap} apart")

    return StructureCertificate(
        window=box,
        grid_step=grid_step,
        shape=(ny, nx),
        condition_i=cond_i,
        condition_i_witness=cond_i_witness,
        condition_ii=cond_ii,
        condition_ii_note=rings,
        condition_iii=cond_iii,
        condition_iii_bound=bound,
        condition_iii_witness=cond_iii_witness,
        min_gap=gap,
        closest_pair=(a, b),
        disjoint=disjoint,
        clipped_rays=clipped,
        failures=failures,
    )
