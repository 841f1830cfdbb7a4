"""Orbit classification for schedules and their compositions.

``classify`` simulates the orbit of a region concretely, remembering every
visited region, so a revisit yields the exact tail and period.  Whenever some
index slot exceeds ``M`` (the largest constant in any pattern or target of
the map) it also runs an escape analysis: slots above ``M`` are tracked
symbolically, which is sound because every pattern either accepts all values
above its constants or none of them.  The abstract state (family, plus each
slot's value or "large") ranges over a finite set, so the abstract orbit
revisits a state.  If between the two visits every large slot only moved by
a non-negative translation, with at least one strictly positive, then the
same sequence of rules repeats forever and the index grows without bound:
the orbit is wandering, and the rule cycle is returned as a certificate.
Otherwise the concrete simulation continues.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Union

from .geometry import BASE, Region
from .lattice import cell_number
from .schedule import Abs, Map, ScheduleError, TransitionSpec, compose
from .theorems import builtin, claims, resolve_theorem

__all__ = [
    "ClassificationError",
    "Periodic",
    "Preperiodic",
    "Wandering",
    "OrbitClass",
    "CycleEdge",
    "EscapeCertificate",
    "orbit",
    "classify",
    "replay_certificate",
    "brute_force_classify",
    "maps_for",
    "probe_regions",
    "TableRow",
    "classify_table",
    "ClaimCheck",
    "ClaimReport",
    "verify_claims",
    "TransferViolation",
    "wandering_transfer_check",
]

LINEAR_PROBE_MAX = 40
GRID_PROBE_MAX = 8


class ClassificationError(RuntimeError):
    pass


@dataclass(frozen=True)
class CycleEdge:
    """One application of the map inside a certified cycle."""

    rules: tuple[str, ...]
    shift: tuple[int, ...]


@dataclass(frozen=True)
class EscapeCertificate:
    """Finite witness that an orbit never repeats.

    ``transient`` lists the orbit from the start region up to (not
    including) ``cycle_start``; from there the map applies the rules in
    ``cycle`` over and over, each pass moving the index slots by
    ``net_shift_vector``.
    """

    start: Region
    transient: tuple[Region, ...]
    cycle_start: Region
    cycle: tuple[CycleEdge, ...]
    net_shift_vector: tuple[int, ...]
    threshold: int

    @property
    def net_shift(self) -> int:
        return sum(self.net_shift_vector)

    @property
    def guard_cycle(self) -> tuple[CycleEdge, ...]:
        return self.cycle

    def to_dict(self, mode: str = "linear") -> dict:
        return {
            "start": self.start.label(mode),
            "transient": [r.label(mode) for r in self.transient],
            "cycle_start": self.cycle_start.label(mode),
            "cycle": [{"rules": list(e.rules), "shift": list(e.shift)} for e in self.cycle],
            "net_shift": self.net_shift,
            "net_shift_vector": list(self.net_shift_vector),
            "threshold": self.threshold,
        }


@dataclass(frozen=True)
class Periodic:
    period: int
    kind = "periodic"

    def __str__(self) -> str:
        return f"Periodic{{period={self.period}}}"

    def to_dict(self, mode: str = "linear") -> dict:
        return {"kind": self.kind, "period": self.period}


@dataclass(frozen=True)
class Preperiodic:
    tail: int
    period: int
    kind = "preperiodic"

    def __str__(self) -> str:
        return f"Preperiodic{{tail={self.tail}, period={self.period}}}"

    def to_dict(self, mode: str = "linear") -> dict:
        return {"kind": self.kind, "tail": self.tail, "period": self.period}


@dataclass(frozen=True)
class Wandering:
    certificate: EscapeCertificate
    kind = "wandering"

    def __str__(self) -> str:
        return f"Wandering{{net_shift={self.certificate.net_shift}}}"

    def to_dict(self, mode: str = "linear") -> dict:
        return {"kind": self.kind, "certificate": self.certificate.to_dict(mode)}


OrbitClass = Union[Periodic, Preperiodic, Wandering]


def orbit(m: Map, r: Region, n: int) -> list[Region]:
    """``[r, m(r), ..., m^n(r)]``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    out = [r]
    for _ in range(n):
        r = m.apply(r)
        out.append(r)
    return out


def _rule_label(spec: TransitionSpec, i: int) -> str:
    return f"{spec.name}#{i}: {spec.rules[i]}"


def _escape(m: Map, state: tuple, threshold: int):
    """Try to certify that the orbit from ``state`` grows without bound.

    Returns ``(prefix_states, edges, delta)`` or ``None``.
    """
    fam, vals = state
    arity = m.steps[0].arity
    lineage: tuple = tuple(0 if v > threshold else None for v in vals)
    n_keys = 3 * (threshold + 2) ** arity
    history: list[tuple] = []
    visits: dict[tuple, list[int]] = {}
    edges: list[CycleEdge] = []

    for t in range(2 * n_keys + 2):
        key = (fam, tuple(v if v <= threshold else None for v in vals))
        for j in visits.get(key, ()):
            _, old_vals, _ = history[j]
            delta = []
            for s, v in enumerate(vals):
                if v > threshold:
                    origin = lineage[s]
                    if origin is None or origin > j or v < old_vals[s]:
                        break
                    delta.append(v - old_vals[s])
                else:
                    delta.append(0)
            else:
                if any(d > 0 for d in delta):
                    prefix = [(f, v) for f, v, _ in history[:j]]
                    return prefix, (history[j][0], history[j][1]), edges[j:t], tuple(delta)
        visits.setdefault(key, []).append(t)
        history.append((fam, vals, lineage))

        labels = []
        old = vals
        for spec in m.steps:
            i, rule = spec.match(fam, vals)
            labels.append(_rule_label(spec, i))
            if rule.target_family == BASE:
                fam, vals, lineage = BASE, (), ()
                continue
            new_vals, new_lin = [], []
            for s, tgt in enumerate(rule.target):
                if isinstance(tgt, Abs):
                    v = tgt.value
                    new_lin.append(None if v <= threshold else t + 1)
                else:
                    v = vals[s] + tgt.offset
                    if vals[s] > threshold:
                        if v <= threshold:
                            return None
                        new_lin.append(lineage[s])
                    else:
                        new_lin.append(None if v <= threshold else t + 1)
                new_vals.append(v)
            fam, vals, lineage = rule.target_family, tuple(new_vals), tuple(new_lin)
        shift = tuple(b - a for a, b in zip(old, vals)) if len(old) == len(vals) else ()
        edges.append(CycleEdge(tuple(labels), shift))
    return None


def classify(m: Map, r: Region, max_steps: int = 1_000_000) -> OrbitClass:
    """Periodic, preperiodic or wandering classification of ``r`` under ``m``."""
    threshold = m.max_constant
    state = m.slots_of(r)
    seen: dict[tuple, int] = {}
    path: list[tuple] = []
    while True:
        if state in seen:
            tail = seen[state]
            period = len(path) - tail
            return Periodic(period) if tail == 0 else Preperiodic(tail, period)
        seen[state] = len(path)
        path.append(state)
        if any(v > threshold for v in state[1]):
            found = _escape(m, state, threshold)
            if found is not None:
                prefix, entry, edges, delta = found
                states = path[:-1] + prefix
                cert = EscapeCertificate(
                    start=r,
                    transient=tuple(m.region_of(*s) for s in states),
                    cycle_start=m.region_of(*entry),
                    cycle=tuple(edges),
                    net_shift_vector=delta,
                    threshold=threshold,
                )
                return Wandering(cert)
        if len(path) > max_steps:
            raise ClassificationError(f"no verdict for {r} after {max_steps} steps")
        state = m.step_raw(*state)


def replay_certificate(m: Map, cert: EscapeCertificate, cycles: int = 100) -> list[Region]:
    """Rebuild the orbit a certificate describes, checking each rule it names.

    Returns the regions at the start of every pass through the cycle.
    Raises ``AssertionError`` if the map deviates from the certificate.
    """
    state = m.slots_of(cert.start)
    for expected in cert.transient:
        assert m.region_of(*state) == expected, f"transient diverges at {expected}"
        state = m.step_raw(*state)
    assert m.region_of(*state) == cert.cycle_start, "cycle start mismatch"
    passes = [cert.cycle_start]
    for _ in range(cycles):
        before = state
        for edge in cert.cycle:
            fam, vals = state
            labels = []
            for spec in m.steps:
                i, _ = spec.match(fam, vals)
                labels.append(_rule_label(spec, i))
                fam, vals = spec.step_raw(fam, vals)
            assert tuple(labels) == edge.rules, f"rule mismatch: {labels} != {edge.rules}"
            state = (fam, vals)
        assert state[0] == before[0]
        got = tuple(b - a for a, b in zip(before[1], state[1]))
        assert got == cert.net_shift_vector, f"shift {got} != {cert.net_shift_vector}"
        passes.append(m.region_of(*state))
    return passes


def _linear_index(state: tuple) -> int:
    fam, vals = state
    if fam == BASE:
        return 0
    return cell_number(*vals) if len(vals) == 2 else vals[0]


def brute_force_classify(m: Map, r: Region, steps: int = 10_000, window: int = 1_000) -> tuple:
    """Bounded oracle independent of the escape analysis.

    Simulates ``steps`` steps: a repeat gives ``("periodic", period)`` or
    ``("preperiodic", tail, period)``; no repeat with the linear index strictly
    increasing over the last ``window`` steps gives ``("wandering",)``;
    anything else is ``("inconclusive",)``.
    """
    state = m.slots_of(r)
    stages = [s.step_raw for s in m.steps]
    seen: dict[tuple, int] = {}
    for t in range(steps + 1):
        if state in seen:
            tail = seen[state]
            if tail == 0:
                return ("periodic", t)
            return ("preperiodic", tail, t - tail)
        seen[state] = t
        fam, vals = state
        for stage in stages:
            fam, vals = stage(fam, vals)
        state = (fam, vals)
    trace = list(seen)
    last = [_linear_index(s) for s in trace[-window - 1:]]
    if all(a < b for a, b in zip(last, last[1:])):
        return ("wandering",)
    return ("inconclusive",)


# -- theorem-level helpers -----------------------------------------------------


def maps_for(f: Map, g: Map) -> dict[str, Map]:
    """``f``, ``g``, ``gf = g o f`` and ``fg = f o g``."""
    return {"f": f, "g": g, "gf": compose(f, g, "gf"), "fg": compose(g, f, "fg")}


def probe_regions(mode: str, linear_max: int = LINEAR_PROBE_MAX, grid_max: int = GRID_PROBE_MAX) -> list[Region]:
    out = [Region.base()]
    for fam in ("G", "B"):
        if mode == "linear":
            out.extend(Region(fam, k) for k in range(1, linear_max + 1))
        else:
            out.extend(Region.grid(fam, p, q) for p in range(0, grid_max + 1) for q in range(1, grid_max + 1))
    return sorted(out)


@dataclass(frozen=True)
class TableRow:
    region: Region
    kinds: dict

    def kind(self, m: str) -> str:
        return self.kinds[m].kind


def classify_table(f: Map, g: Map, probe: Iterable[Region]) -> list[TableRow]:
    if f.mode != g.mode:
        raise ScheduleError("E_MODE_MISMATCH", f"cannot tabulate {f.mode} with {g.mode} schedules")
    maps = maps_for(f, g)
    return [TableRow(r, {name: classify(mp, r) for name, mp in maps.items()}) for r in sorted(set(probe))]


def _selector(pattern: str, mode: str):
    from .dsl import _LineParser, tokenize

    p = _LineParser(tokenize(pattern, 0), 0, pattern)
    fam, _ = p.family()
    slots = () if fam == BASE else p.slots(p.pat)
    p.done()

    def pick(r: Region) -> bool:
        if r.family != fam:
            return False
        if fam == BASE:
            return True
        vals = r.cell if mode == "grid" else (r.index,)
        return len(vals) == len(slots) and all(s.matches(v) for s, v in zip(slots, vals))

    return pick


@dataclass(frozen=True)
class ClaimCheck:
    theorem: str
    source: str
    pattern: str
    region: Region
    map: str
    expected: str
    computed: OrbitClass

    @property
    def passed(self) -> bool:
        return self.computed.kind == self.expected


@dataclass
class ClaimReport:
    theorem: str
    mode: str
    checks: list[ClaimCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[ClaimCheck]:
        return [c for c in self.checks if not c.passed]

    def assertions(self) -> list[tuple[str, str, str, str]]:
        """Distinct ``(source, pattern, map, kind)`` assertions covered."""
        seen = []
        for c in self.checks:
            key = (c.source, c.pattern, c.map, c.expected)
            if key not in seen:
                seen.append(key)
        return seen

    def summary(self) -> dict:
        counts = Counter(c.passed for c in self.checks)
        return {"checks": len(self.checks), "passed": counts[True], "failed": counts[False],
                "assertions": len(self.assertions())}


def verify_claims(theorem_id: str, linear_max: int = LINEAR_PROBE_MAX, grid_max: int = GRID_PROBE_MAX) -> ClaimReport:
    tid = resolve_theorem(theorem_id)
    f, g = builtin(tid)
    maps = maps_for(f, g)
    probe = probe_regions(f.mode, linear_max, grid_max)
    report = ClaimReport(tid, f.mode)
    cache: dict[tuple[str, Region], OrbitClass] = {}
    for claim in claims(tid):
        pick = _selector(claim.pattern, f.mode)
        regions = [r for r in probe if pick(r)]
        if not regions:
            raise ValueError(f"claim pattern {claim.pattern} matches no probe region")
        for r in regions:
            for name, kind in claim.expected().items():
                key = (name, r)
                if key not in cache:
                    cache[key] = classify(maps[name], r)
                report.checks.append(ClaimCheck(tid, claim.source, claim.pattern, r, name, kind, cache[key]))
    return report


@dataclass(frozen=True)
class TransferViolation:
    region: Region
    wandering_under: str
    image: Region
    image_class: OrbitClass


def wandering_transfer_check(f: Map, g: Map, probe: Iterable[Region], classifier=None) -> list[TransferViolation]:
    """Regions where a wandering orbit of one composite does not carry over.

    If ``R`` wanders under ``g o f`` then ``f(R)`` must wander under
    ``f o g``, since ``(f o g)^n (f(R)) = f((g o f)^n (R))``; symmetrically
    with ``g``.  For deterministic schedules this always holds, so a
    violation points at a classifier bug; ``classifier`` can be swapped to
    exercise the reporting.
    """
    classifier = classifier or classify
    maps = maps_for(f, g)
    out = []
    for r in sorted(set(probe)):
        for comp, other, via in (("gf", "fg", f), ("fg", "gf", g)):
            if classifier(maps[comp], r).kind != "wandering":
                continue
            image = via.apply(r)
            got = classifier(maps[other], image)
            if got.kind != "wandering":
                out.append(TransferViolation(r, comp, image, got))
    return out
