"""Built-in schedules for the ten constructions and their claim tables.

Every rule is stored next to the target centre exactly as the construction
writes it (for example ``-(4(q(q-1)/2 + 1) + 2)``), so the realizability
check compares an independent closed form against the centre obtained
through the lattice bijection.

Claim rows record the kinds asserted for a region pattern under ``f``,
``g``, ``gf`` (``g o f``) and ``fg`` (``f o g``); ``None`` means no claim.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

from .dsl import parse_file
from .schedule import TransitionSpec

__all__ = [
    "THEOREM_IDS",
    "MAP_NAMES",
    "Claim",
    "builtin",
    "builtin_text",
    "claims",
    "resolve_theorem",
    "aliases",
]

THEOREM_IDS = ("2.1", "2.2", "2.3", "2.4", "2.5", "2.7", "2.9", "2.11", "2.13", "2.15")
MAP_NAMES = ("f", "g", "gf", "fg")

P, PP, W = "periodic", "preperiodic", "wandering"


def _tri(p: int, q: int) -> int:
    # the array entry in row p, column q+1, as it appears in the displays
    return q * (q + 1) // 2 + 1 + p * (q + 1) + p * (p + 1) // 2


def _head(q: int) -> int:
    return q * (q - 1) // 2 + 1


Center = Callable[[dict], int]

# (rule, displayed target centre as a function of the rule's bound variables)
_BASE: tuple[str, Center] = ("BASE -> BASE", lambda v: 2)

_RULES: dict[str, dict[str, list[tuple[str, Center]]]] = {
    "2.1": {
        "f": [
            _BASE,
            ("G[p,q] -> B[0,q]", lambda v: -(4 * _head(v["q"]) + 2)),
            ("B[p,q] -> B[p,q+1]", lambda v: -(4 * _tri(v["p"], v["q"]) + 2)),
        ],
        "g": [
            _BASE,
            ("B[p,q] -> G[0,q]", lambda v: 4 * _head(v["q"]) + 2),
            ("G[p,q] -> G[p,q+1]", lambda v: 4 * _tri(v["p"], v["q"]) + 2),
        ],
    },
    "2.2": {
        "f": [
            _BASE,
            ("G[p,q] -> B[0,q]", lambda v: -(4 * _head(v["q"]) + 2)),
            ("B[p,q] -> B[p,q+1]", lambda v: -(4 * _tri(v["p"], v["q"]) + 2)),
        ],
        "g": [
            _BASE,
            ("B[p,q] -> B[p,q+1]", lambda v: -(4 * _tri(v["p"], v["q"]) + 2)),
            ("G[0,q] -> B[0,q]", lambda v: -(4 * _head(v["q"]) + 2)),
            ("G[p>=1,q] -> G[p,q+1]", lambda v: 4 * _tri(v["p"], v["q"]) + 2),
        ],
    },
    "2.3": {
        "f": [
            _BASE,
            ("G[0,q] -> B[0,q]", lambda v: -(4 * _head(v["q"]) + 2)),
            ("B[0,q] -> G[0,q]", lambda v: 4 * _head(v["q"]) + 2),
            ("B[p>=1,q] -> B[p,q+1]", lambda v: -(4 * _tri(v["p"], v["q"]) + 2)),
            ("G[p>=1,q] -> G[p,q+1]", lambda v: 4 * _tri(v["p"], v["q"]) + 2),
        ],
        "g": [
            _BASE,
            ("G[0,q] -> B[1,q]", lambda v: -(4 * (v["q"] * (v["q"] - 1) // 2 + v["q"] + 2) + 2)),
            ("B[0,q] -> B[2,q]", lambda v: -(4 * (v["q"] * (v["q"] - 1) // 2 + 2 * v["q"] + 4) + 2)),
            ("B[p>=2,q] -> B[p,q+1]", lambda v: -(4 * _tri(v["p"], v["q"]) + 2)),
            ("B[1,q] -> G[0,q]", lambda v: 4 * _head(v["q"]) + 2),
            ("G[p>=1,q] -> G[p,q+1]", lambda v: 4 * _tri(v["p"], v["q"]) + 2),
        ],
    },
    "2.4": {
        "f": [
            _BASE,
            ("G[0,q] -> B[0,q]", lambda v: -(4 * _head(v["q"]) + 2)),
            ("B[0,q] -> G[0,q]", lambda v: 4 * _head(v["q"]) + 2),
            ("B[1,q] -> B[3,q]", lambda v: -(4 * (v["q"] * (v["q"] - 1) // 2 + 3 * v["q"] + 7) + 2)),
            ("B[2,q] -> B[1,q]", lambda v: -(4 * (v["q"] * (v["q"] - 1) // 2 + v["q"] + 2) + 2)),
            ("B[p>=3,q] -> B[p,q+1]", lambda v: -(4 * _tri(v["p"], v["q"]) + 2)),
            ("G[p>=1,q] -> G[p,q+1]", lambda v: 4 * _tri(v["p"], v["q"]) + 2),
        ],
        "g": [
            _BASE,
            ("G[0,q] -> B[1,q]", lambda v: -(4 * (v["q"] * (v["q"] - 1) // 2 + v["q"] + 2) + 2)),
            ("B[0,q] -> B[2,q]", lambda v: -(4 * (v["q"] * (v["q"] - 1) // 2 + 2 * v["q"] + 4) + 2)),
            ("B[1,q] -> G[0,q]", lambda v: 4 * _head(v["q"]) + 2),
            ("B[p>=2,q] -> B[p,q+1]", lambda v: -(4 * _tri(v["p"], v["q"]) + 2)),
            ("G[p>=1,q] -> G[p,q+1]", lambda v: 4 * _tri(v["p"], v["q"]) + 2),
        ],
    },
    "2.5": {
        "f": [
            _BASE,
            ("G[1] -> B[1]", lambda v: -6),
            ("B[1] -> G[2]", lambda v: 10),
            ("G[2] -> B[2]", lambda v: -10),
            ("B[2] -> G[1]", lambda v: 6),
            ("B[k>=3] -> B[k+1]", lambda v: -(4 * v["k"] + 6)),
            ("G[k>=3] -> G[k+1]", lambda v: 4 * v["k"] + 6),
        ],
        "g": [
            _BASE,
            ("G[1] -> B[1]", lambda v: -6),
            ("G[2] -> B[2]", lambda v: -10),
            ("B[k>=1] -> B[k+1]", lambda v: -(4 * v["k"] + 6)),
            ("G[k>=3] -> G[k+1]", lambda v: 4 * v["k"] + 6),
        ],
    },
    "2.7": {
        "f": [
            _BASE,
            ("G[1] -> B[1]", lambda v: -6),
            ("B[1] -> B[2]", lambda v: -10),
            ("B[2] -> G[1]", lambda v: 6),
            ("B[k>=3] -> B[k+1]", lambda v: -(4 * v["k"] + 6)),
            ("G[k>=2] -> G[k+1]", lambda v: 4 * v["k"] + 6),
        ],
        "g": [
            _BASE,
            ("G[1] -> B[1]", lambda v: -6),
            ("B[k>=1] -> B[k+1]", lambda v: -(4 * v["k"] + 6)),
            ("G[k>=2] -> G[k+1]", lambda v: 4 * v["k"] + 6),
        ],
    },
    "2.9": {
        "f": [
            _BASE,
            ("G[1] -> B[1]", lambda v: -6),
            ("B[1] -> G[1]", lambda v: 6),
            ("B[2] -> G[1]", lambda v: 6),
            ("B[k>=3] -> B[k-1]", lambda v: -(4 * v["k"] - 2)),
            ("G[k>=2] -> G[k+1]", lambda v: 4 * v["k"] + 6),
        ],
        "g": [
            _BASE,
            ("G[1] -> B[1]", lambda v: -6),
            ("B[2] -> G[1]", lambda v: 6),
            ("B[1] -> B[3]", lambda v: -14),
            ("B[k>=3] -> B[k+1]", lambda v: -(4 * v["k"] + 6)),
            ("G[k>=2] -> G[k+1]", lambda v: 4 * v["k"] + 6),
        ],
    },
    "2.11": {
        "f": [
            _BASE,
            ("G[1] -> B[1]", lambda v: -6),
            ("B[1] -> G[1]", lambda v: 6),
            ("B[2] -> B[3]", lambda v: -14),
            ("B[3] -> B[4]", lambda v: -18),
            ("B[4] -> B[1]", lambda v: -6),
            ("B[k>=5] -> B[k+1]", lambda v: -(4 * v["k"] + 6)),
            ("G[k>=2] -> G[k+1]", lambda v: 4 * v["k"] + 6),
        ],
        "g": [
            _BASE,
            ("B[1] -> B[2]", lambda v: -10),
            ("B[2] -> G[1]", lambda v: 6),
            ("B[3] -> B[4]", lambda v: -18),
            ("B[4] -> B[1]", lambda v: -6),
            ("B[k>=5] -> B[k+1]", lambda v: -(4 * v["k"] + 6)),
            ("G[k>=1] -> G[k+1]", lambda v: 4 * v["k"] + 6),
        ],
    },
    "2.13": {
        "f": [
            _BASE,
            ("G[k>=1] -> B[1]", lambda v: -6),
            ("B[1] -> B[2]", lambda v: -10),
            ("B[k>=2] -> B[k-1]", lambda v: -(4 * v["k"] - 2)),
        ],
        "g": [
            _BASE,
            ("G[1] -> B[1]", lambda v: -6),
            ("B[1] -> B[2]", lambda v: -10),
            ("B[k>=2] -> B[k-1]", lambda v: -(4 * v["k"] - 2)),
            ("G[k>=2] -> G[k-1]", lambda v: 4 * v["k"] - 2),
        ],
    },
    "2.15": {
        "f": [
            _BASE,
            ("G[1] -> B[1]", lambda v: -6),
            ("B[1] -> G[2]", lambda v: 10),
            ("G[2] -> B[1]", lambda v: -6),
            ("B[k>=2] -> B[k+1]", lambda v: -(4 * v["k"] + 6)),
            ("G[k>=3] -> G[k+1]", lambda v: 4 * v["k"] + 6),
        ],
        "g": [
            _BASE,
            ("G[1] -> B[3]", lambda v: -14),
            ("B[1] -> G[2]", lambda v: 10),
            ("B[2] -> B[3]", lambda v: -14),
            ("B[3] -> B[2]", lambda v: -10),
            ("G[k>=2] -> G[k+1]", lambda v: 4 * v["k"] + 6),
            ("B[k>=4] -> B[k+1]", lambda v: -(4 * v["k"] + 6)),
        ],
    },
}

_GRID = {"2.1", "2.2", "2.3", "2.4"}


@dataclass(frozen=True)
class Claim:
    theorem: str
    source: str
    pattern: str
    f: Optional[str] = None
    g: Optional[str] = None
    gf: Optional[str] = None
    fg: Optional[str] = None

    def expected(self) -> dict[str, str]:
        return {m: getattr(self, m) for m in MAP_NAMES if getattr(self, m) is not None}


def _rows(tid: str, *rows: tuple) -> list[Claim]:
    return [Claim(tid, src, pat, *kinds) for src, pat, *kinds in rows]


_CLAIMS: dict[str, list[Claim]] = {
    "2.1": _rows("2.1", ("theorem", "G[0,q]", W, W, P, None)),
    "2.2": _rows("2.2", ("theorem", "G[0,q]", W, W, W, W)),
    "2.3": _rows("2.3", ("theorem", "G[0,q]", P, P, W, W)),
    "2.4": _rows("2.4", ("theorem", "G[0,q]", P, P, P, W)),
    "2.5": _rows(
        "2.5",
        ("theorem", "G[1]", P, W, PP, P),
        ("remark (i)", "B[2]", P, W, P, W),
        ("remark (ii)", "B[1]", P, W, P, PP),
        ("remark (iii)", "G[2]", P, W, W, P),
        ("remark (iv)", "G[k>=3]", W, W, W, W),
        ("remark (iv)", "B[k>=3]", W, W, W, W),
    ),
    "2.7": _rows(
        "2.7",
        ("theorem", "G[1]", P, W, W, W),
        ("remark (i)", "B[1]", P, W, W, W),
        ("remark (i)", "B[2]", P, W, W, W),
        ("remark (ii)", "B[k>=3]", W, W, W, W),
        ("remark (ii)", "G[k>=2]", W, W, W, W),
    ),
    "2.9": _rows(
        "2.9",
        ("theorem", "G[1]", P, W, P, P),
        ("remark (i)", "B[1]", P, W, P, P),
        ("remark (ii)", "B[2]", PP, W, PP, P),
        ("remark (iii)", "B[k>=3]", PP, W, P, P),
        ("remark (iv)", "G[k>=2]", W, W, W, W),
    ),
    "2.11": _rows(
        "2.11",
        ("theorem", "G[1]", P, W, PP, W),
        ("remark (i)", "G[k>=2]", W, W, W, W),
        ("remark (ii)", "B[1]", P, W, W, P),
        ("remark (iii)", "B[2]", PP, W, P, PP),
        ("remark (iv)", "B[3]", PP, W, W, P),
        ("remark (v)", "B[4]", PP, W, P, W),
        ("remark (vi)", "B[k>=5]", W, W, W, W),
    ),
    "2.13": _rows(
        "2.13",
        ("theorem", "G[k>=1]", PP, PP, PP, PP),
        ("remark (i)", "B[1]", P, P, P, P),
        ("remark (i)", "B[2]", P, P, P, P),
        ("remark (ii)", "B[k>=3]", PP, PP, PP, PP),
    ),
    "2.15": _rows(
        "2.15",
        ("theorem", "G[1]", PP, PP, PP, W),
        ("remark (i)", "B[1]", P, W, W, P),
        ("remark (ii)", "G[2]", P, W, P, W),
        ("remark (iii)", "G[k>=3]", W, W, W, W),
        ("remark (iv)", "B[2]", W, P, P, W),
        ("remark (v)", "B[3]", W, P, W, P),
        ("remark (vi)", "B[k>=4]", W, W, W, W),
    ),
}


def aliases() -> dict[str, str]:
    """Claim-shape names (kinds of the headline domain under f, g, gf, fg)."""
    out = {}
    for tid in THEOREM_IDS:
        head = _CLAIMS[tid][0]
        out["-".join(head.expected().values())] = tid
    return out


def resolve_theorem(name: str) -> str:
    key = str(name).strip()
    if key.lower().startswith("thm"):
        key = key[3:].lstrip(" .")
    if key in _RULES:
        return key
    shapes = aliases()
    if key.lower() in shapes:
        return shapes[key.lower()]
    raise KeyError(f"unknown theorem {name!r}; choose from {', '.join(THEOREM_IDS)} or {', '.join(sorted(shapes))}")


def builtin_text(theorem_id: str) -> str:
    tid = resolve_theorem(theorem_id)
    mode = "grid" if tid in _GRID else "linear"
    lines = [f"# construction {tid}", f"mode = {mode}"]
    for name in ("f", "g"):
        lines.append(f"[{name}]")
        lines.extend(text for text, _ in _RULES[tid][name])
    return "\n".join(lines) + "\n"


@lru_cache(maxsize=None)
def builtin(theorem_id: str) -> tuple[TransitionSpec, TransitionSpec]:
    """The ``(f, g)`` schedules of a construction."""
    tid = resolve_theorem(theorem_id)
    parsed = parse_file(builtin_text(tid))
    out = []
    for name in ("f", "g"):
        spec = parsed[name]
        shown = tuple(fn for _, fn in _RULES[tid][name])
        out.append(TransitionSpec(f"{name}[{tid}]", spec.mode, spec.rules, shown))
    return out[0], out[1]


def claims(theorem_id: str) -> list[Claim]:
    return list(_CLAIMS[resolve_theorem(theorem_id)])
