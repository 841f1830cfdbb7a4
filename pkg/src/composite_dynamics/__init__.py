"""Symbolic region schedules for compositions of entire functions.

Encodes the disk-and-ray region families, the piecewise target maps as
validated rule schedules, continuity moduli for the exponential targets, and
an orbit classifier for ``f``, ``g``, ``g o f`` and ``f o g``.
"""

__version__ = "0.1.0"

from .analytic import check_rule_realizability, derive_tolerances, modulus_radius, sup_image_deviation
from .dsl import parse_file, parse_spec
from .dynamics import (
    EscapeCertificate,
    Periodic,
    Preperiodic,
    Wandering,
    brute_force_classify,
    classify,
    classify_table,
    orbit,
    verify_claims,
    wandering_transfer_check,
)
from .geometry import STANDARD_FAMILY, CarlemanFamily, Region, center, min_separation, verify_structure
from .lattice import GridIndex, LinearIndex, grid_to_linear, linear_to_grid
from .schedule import Composition, ScheduleError, TransitionSpec, compose, identity_spec
from .svg import emit_diagram
from .theorems import THEOREM_IDS, builtin, claims

__all__ = [
    "__version__",
    "CarlemanFamily",
    "Composition",
    "EscapeCertificate",
    "GridIndex",
    "LinearIndex",
    "STANDARD_FAMILY",
    "Periodic",
    "Preperiodic",
    "Region",
    "ScheduleError",
    "THEOREM_IDS",
    "TransitionSpec",
    "Wandering",
    "brute_force_classify",
    "builtin",
    "center",
    "check_rule_realizability",
    "claims",
    "classify",
    "classify_table",
    "compose",
    "derive_tolerances",
    "emit_diagram",
    "grid_to_linear",
    "identity_spec",
    "linear_to_grid",
    "min_separation",
    "modulus_radius",
    "orbit",
    "parse_file",
    "parse_spec",
    "sup_image_deviation",
    "verify_claims",
    "verify_structure",
    "wandering_transfer_check",
]
