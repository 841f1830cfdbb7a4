"""Continuity moduli for the ideal target maps ``z -> exp(w)``.

Each schedule rule asks for ``|exp(w) - c| < 1/2`` whenever ``w`` is close
enough to a logarithm ``w0`` of the target centre ``c``.  Writing
``exp(w) - exp(w0) = c (exp(w - w0) - 1)`` gives the sharp bound

    sup_{|w - w0| <= r} |exp(w) - c| = |c| (exp(r) - 1),

attained in the real direction, so the largest admissible radius is
``log(1 + 1/(2|c|))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .geometry import BASE, Region, center

if TYPE_CHECKING:
    from .schedule import TransitionSpec

__all__ = [
    "IMAGE_RADIUS",
    "LogTarget",
    "RealizabilityReport",
    "ToleranceAssignment",
    "UnrealizableRule",
    "modulus_radius",
    "sup_image_deviation",
    "sampled_deviation",
    "sampled_crossing",
    "check_rule_realizability",
    "derive_tolerances",
]

IMAGE_RADIUS = 0.5


class UnrealizableRule(ValueError):
    """A rule whose log-target does not land in its scheduled region."""

    def __init__(self, report: "RealizabilityReport"):
        self.report = report
        super().__init__(
            f"{report.source} -> {report.target}: centre {report.c} does not match "
            f"target centre {report.target_center}"
        )


@dataclass(frozen=True)
class LogTarget:
    """A target centre ``c`` and the branch of ``log c`` the rule aims at."""

    c: int

    def __post_init__(self) -> None:
        if abs(self.c) < 2:
            raise ValueError(f"target centre must satisfy |c| >= 2, got {self.c}")

    @classmethod
    def for_region(cls, r: Region) -> "LogTarget":
        return cls(center(r))

    @property
    def w0(self) -> complex:
        if self.c > 0:
            return complex(math.log(self.c), 0.0)
        return complex(math.log(-self.c), math.pi)

    def __str__(self) -> str:
        if self.c > 0:
            return f"log {self.c}"
        return f"pi*i + log {-self.c}"


def modulus_radius(c_abs: float) -> float:
    """Largest ``r`` with ``|w - w0| < r  =>  |exp(w) - c| < 1/2``."""
    if not c_abs >= 2:
        raise ValueError(f"modulus_radius needs |c| >= 2, got {c_abs}")
    return math.log1p(1.0 / (2.0 * c_abs))


def sup_image_deviation(c_abs: float, r: float) -> float:
    if r < 0:
        raise ValueError("radius must be >= 0")
    return c_abs * math.expm1(r)


def sampled_deviation(c: int, r: float, samples: int = 100_000) -> float:
    """Largest ``|exp(w) - c|`` over ``samples`` points on ``|w - w0| = r``."""
    w0 = LogTarget(c).w0
    theta = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
    w = w0 + r * np.exp(1j * theta)
    return float(np.max(np.abs(np.exp(w) - c)))


def sampled_crossing(c: int, samples: int = 100_000, tol: float = 1e-12) -> float:
    """Radius at which the sampled deviation first reaches 1/2 (bisection)."""
    lo, hi = 0.0, 1.0
    while sampled_deviation(c, hi, samples) < IMAGE_RADIUS:
        hi *= 2
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if sampled_deviation(c, mid, samples) < IMAGE_RADIUS:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class RealizabilityReport:
    source: str
    target: str
    c: int
    target_center: int
    center_matches: bool
    half_disk_inside: bool
    tolerance: float
    margin: float

    @property
    def tolerance_positive(self) -> bool:
        return self.tolerance > 0

    @property
    def realizable(self) -> bool:
        return self.center_matches and self.half_disk_inside and self.tolerance_positive

    @property
    def status(self) -> str:
        return "REALIZABLE" if self.realizable else "UNREALIZABLE"


def check_rule_realizability(source: Region, target: Region, lt: LogTarget) -> RealizabilityReport:
    """Check that exp of a ball around ``lt.w0`` lands inside ``target``.

    The image lies in ``{|z - c| < 1/2}``; it must sit in the closed unit disk
    of the target, which it does with margin ``1 - |c - centre| - 1/2``.
    """
    if target.family not in (BASE, "G", "B"):
        raise ValueError(f"target {target} is not a disk region")
    tc = center(target)
    margin = 1.0 - abs(lt.c - tc) - IMAGE_RADIUS
    return RealizabilityReport(
        source=str(source),
        target=str(target),
        c=lt.c,
        target_center=tc,
        center_matches=lt.c == tc,
        half_disk_inside=margin >= 0,
        tolerance=modulus_radius(abs(lt.c)),
        margin=margin,
    )


@dataclass
class ToleranceAssignment:
    """Per-region radius for the approximation of the log-target map."""

    eps: dict[Region, float]

    def __getitem__(self, r: Region) -> float:
        return self.eps[r]

    def __len__(self) -> int:
        return len(self.eps)

    def items(self):
        return sorted(self.eps.items())


def derive_tolerances(spec: "TransitionSpec", max_index: int = 50) -> ToleranceAssignment:
    """Assign the maximal admissible radius to every region up to ``max_index``.

    ``max_index`` bounds the linear index in linear mode and both ``p`` and
    ``q`` in grid mode.
    """
    eps: dict[Region, float] = {}
    for region in spec.regions(max_index):
        rule = spec.rule_for(region)
        target = spec.apply(region)
        lt = rule.log_target(target)
        report = check_rule_realizability(region, target, lt)
        if not report.realizable:
            raise UnrealizableRule(report)
        eps[region] = report.tolerance
    return ToleranceAssignment(eps)
