"""Piecewise target maps as rule schedules on the symbolic regions.

A schedule lists rules ``pattern -> target``.  Patterns select a family
(``G``, ``B`` or ``BASE``) and constrain each index slot by an exact value,
a lower-bound guard ``var >= n`` or a free variable.  Targets name a family
and give each slot as an absolute value or ``var + offset``.

Two addressing modes exist: ``linear`` (one slot ``k >= 1``) and ``grid``
(slots ``p >= 0, q >= 1`` read through the diagonal bijection).

Validation is symbolic and rejects schedules that are not total, not
deterministic (patterns must be pairwise disjoint; there is no rule
priority), or whose targets can leave the index domain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterator, Optional, Sequence, Union

from .geometry import BASE, Region, center
from .lattice import cell_number, cell_position

__all__ = [
    "MODES",
    "SLOT_MINIMUM",
    "ScheduleError",
    "Exact",
    "Guard",
    "Free",
    "Abs",
    "Var",
    "Rule",
    "TransitionSpec",
    "Composition",
    "compose",
    "identity_spec",
]

MODES = ("linear", "grid")
SLOT_MINIMUM = {"linear": (1,), "grid": (0, 1)}
SLOT_NAMES = {"linear": ("k",), "grid": ("p", "q")}
FAMILIES = ("G", "B")


class ScheduleError(Exception):
    """Diagnostic for a malformed or semantically invalid schedule.

    ``code`` is one of ``E_SYNTAX``, ``E_OVERLAP``, ``E_GAP``, ``E_DOMAIN``
    or ``E_MODE_MISMATCH``; ``witness`` names a concrete region that exhibits
    the problem when there is one.
    """

    def __init__(self, code: str, message: str, line: int | None = None, col: int | None = None,
                 witness: str | None = None):
        self.code = code
        self.message = message
        self.line = line
        self.col = col
        self.witness = witness
        where = f"{line}:{col}: " if line is not None else ""
        tail = f" (witness {witness})" if witness else ""
        super().__init__(f"{where}{code}: {message}{tail}")

    @property
    def is_syntax(self) -> bool:
        return self.code == "E_SYNTAX"

    def to_dict(self) -> dict:
        return {"code": self.code, "message": self.message, "line": self.line, "col": self.col,
                "witness": self.witness}


# -- pattern slots and target expressions --------------------------------------


@dataclass(frozen=True)
class Exact:
    value: int

    def lower(self, minimum: int) -> int:
        return self.value

    def upper(self) -> Optional[int]:
        return self.value

    def matches(self, v: int) -> bool:
        return v == self.value

    @property
    def var(self) -> None:
        return None

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Guard:
    var: str
    bound: int

    def lower(self, minimum: int) -> int:
        return self.bound

    def upper(self) -> None:
        return None

    def matches(self, v: int) -> bool:
        return v >= self.bound

    def __str__(self) -> str:
        return f"{self.var}>={self.bound}"


@dataclass(frozen=True)
class Free:
    var: str

    def lower(self, minimum: int) -> int:
        return minimum

    def upper(self) -> None:
        return None

    def matches(self, v: int) -> bool:
        return True

    def __str__(self) -> str:
        return self.var


SlotPattern = Union[Exact, Guard, Free]


@dataclass(frozen=True)
class Abs:
    value: int

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Var:
    var: str
    offset: int = 0

    def __str__(self) -> str:
        if self.offset > 0:
            return f"{self.var}+{self.offset}"
        if self.offset < 0:
            return f"{self.var}-{-self.offset}"
        return self.var


SlotTarget = Union[Abs, Var]


def _fmt(family: str, slots: Sequence) -> str:
    if family == BASE:
        return BASE
    return f"{family}[{','.join(str(s) for s in slots)}]"


@dataclass(frozen=True)
class Rule:
    family: str
    pattern: tuple[SlotPattern, ...]
    target_family: str
    target: tuple[SlotTarget, ...]
    line: int | None = None
    col: int | None = None

    def __str__(self) -> str:
        return f"{_fmt(self.family, self.pattern)} -> {_fmt(self.target_family, self.target)}"

    def matches(self, family: str, slots: Sequence[int]) -> bool:
        if family != self.family:
            return False
        for pat, v in zip(self.pattern, slots):
            if not pat.matches(v):
                return False
        return True

    def resolve(self, slots: Sequence[int]) -> tuple[int, ...]:
        out = []
        for i, t in enumerate(self.target):
            if isinstance(t, Abs):
                out.append(t.value)
            else:
                out.append(slots[i] + t.offset)
        return tuple(out)

    def bindings(self, slots: Sequence[int]) -> dict[str, int]:
        return {pat.var: v for pat, v in zip(self.pattern, slots) if pat.var is not None}

    @property
    def is_guard(self) -> bool:
        """True when some slot is unbounded, so the rule covers infinitely many regions."""
        return any(not isinstance(p, Exact) for p in self.pattern)

    def constants(self) -> Iterator[int]:
        for p in self.pattern:
            if isinstance(p, Exact):
                yield p.value
            elif isinstance(p, Guard):
                yield p.bound
        for t in self.target:
            if isinstance(t, Abs):
                yield t.value


# -- specs ---------------------------------------------------------------------

DisplayedCenter = Callable[[dict], int]


@dataclass(frozen=True)
class TransitionSpec:
    """A validated, total and deterministic schedule.

    ``displayed`` optionally carries, per rule, the target centre written
    out independently of the lattice bijection (used by realizability
    checks of the built-in schedules).
    """

    name: str
    mode: str
    rules: tuple[Rule, ...]
    displayed: tuple[Optional[DisplayedCenter], ...] = ()
    _by_family: dict = field(default=None, init=False, repr=False, compare=False, hash=False)
    _fast: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ScheduleError("E_SYNTAX", f"unknown mode {self.mode!r}")
        if self.displayed and len(self.displayed) != len(self.rules):
            raise ValueError("displayed centres must align with rules")
        validate(self)
        table: dict[str, list[tuple[int, Rule]]] = {}
        for i, rule in enumerate(self.rules):
            table.setdefault(rule.family, []).append((i, rule))
        object.__setattr__(self, "_by_family", table)
        object.__setattr__(self, "_fast", {fam: tuple(_compile(r) for _, r in rs) for fam, rs in table.items()})

    def __hash__(self) -> int:
        return hash((self.name, self.mode, self.rules))

    # composition interface
    @property
    def steps(self) -> tuple["TransitionSpec", ...]:
        return (self,)

    @property
    def arity(self) -> int:
        return len(SLOT_MINIMUM[self.mode])

    @property
    def max_constant(self) -> int:
        consts = [c for r in self.rules for c in r.constants()]
        return max(consts + list(SLOT_MINIMUM[self.mode]))

    # region <-> slots
    def slots_of(self, r: Region) -> tuple[str, tuple[int, ...]]:
        if r.family in (BASE, "L", "M"):
            return BASE, ()
        if self.mode == "grid":
            return r.family, cell_position(r.index)
        return r.family, (r.index,)

    def region_of(self, family: str, slots: Sequence[int]) -> Region:
        if family == BASE:
            return Region.base()
        if self.mode == "grid":
            return Region(family, cell_number(*slots))
        return Region(family, slots[0])

    # evaluation
    def match(self, family: str, slots: Sequence[int]) -> tuple[int, Rule]:
        for i, rule in self._by_family.get(family, ()):
            if rule.matches(family, slots):
                return i, rule
        raise AssertionError(f"validated spec {self.name} has no rule for {_fmt(family, slots)}")

    def step_raw(self, family: str, slots: tuple[int, ...]) -> tuple[str, tuple[int, ...]]:
        # hot path of every simulation; same result as match() + resolve()
        for exact, lower, tfam, keep, add in self._fast[family]:
            for s, v in exact:
                if slots[s] != v:
                    break
            else:
                for s, v in lower:
                    if slots[s] < v:
                        break
                else:
                    if keep is None:
                        return tfam, ()
                    return tfam, tuple([x * k + a for x, k, a in zip(slots, keep, add)])
        raise AssertionError(f"validated spec {self.name} has no rule for {_fmt(family, slots)}")

    def rule_for(self, r: Region) -> "RuleView":
        fam, slots = self.slots_of(r)
        i, rule = self.match(fam, slots)
        return RuleView(self, i, rule, rule.bindings(slots))

    def apply(self, r: Region) -> Region:
        fam, slots = self.slots_of(r)
        fam, slots = self.step_raw(fam, slots)
        return self.region_of(fam, slots)

    def __call__(self, r: Region) -> Region:
        return self.apply(r)

    def regions(self, max_index: int) -> list[Region]:
        """BASE plus every G/B region with all slots <= ``max_index``."""
        out = [Region.base()]
        for fam in FAMILIES:
            if self.mode == "linear":
                out.extend(Region(fam, k) for k in range(1, max_index + 1))
            else:
                out.extend(Region.grid(fam, p, q) for p in range(0, max_index + 1)
                           for q in range(1, max_index + 1))
        return out

    def to_text(self, with_mode: bool = True) -> str:
        lines = [f"mode = {self.mode}"] if with_mode else []
        lines.append(f"[{self.name}]")
        lines.extend(str(r) for r in self.rules)
        return "\n".join(lines) + "\n"


def _compile(rule: Rule) -> tuple:
    exact = tuple((s, p.value) for s, p in enumerate(rule.pattern) if isinstance(p, Exact))
    lower = tuple((s, p.bound) for s, p in enumerate(rule.pattern) if isinstance(p, Guard))
    if rule.target_family == BASE:
        return exact, lower, BASE, None, None
    keep = tuple(0 if isinstance(t, Abs) else 1 for t in rule.target)
    add = tuple(t.value if isinstance(t, Abs) else t.offset for t in rule.target)
    return exact, lower, rule.target_family, keep, add


@dataclass(frozen=True)
class RuleView:
    """A rule as it applies to one concrete source region."""

    spec: TransitionSpec
    index: int
    rule: Rule
    bindings: dict

    def log_target(self, target: Region):
        from .analytic import LogTarget

        shown = self.spec.displayed[self.index] if self.spec.displayed else None
        if shown is not None:
            return LogTarget(shown(self.bindings))
        return LogTarget(center(target))


# -- validation ----------------------------------------------------------------


def _interval(pat: SlotPattern, minimum: int) -> tuple[int, Optional[int]]:
    return pat.lower(minimum), pat.upper()


def _witness(spec_mode: str, family: str, slots: Sequence[int]) -> str:
    if family == BASE:
        return BASE
    if spec_mode == "grid":
        return f"{family}({slots[0]},{slots[1]})"
    return f"{family}{slots[0]}"


def validate(spec: TransitionSpec) -> None:
    mode = spec.mode
    mins = SLOT_MINIMUM[mode]
    arity = len(mins)

    for rule in spec.rules:
        _check_rule_shape(rule, mode, mins, arity)

    base_rules = [r for r in spec.rules if r.family == BASE]
    if not base_rules:
        raise ScheduleError("E_GAP", "no rule covers BASE", witness=BASE)
    if len(base_rules) > 1:
        r = base_rules[1]
        raise ScheduleError("E_OVERLAP", f"BASE matched by '{base_rules[0]}' and '{r}'", r.line, r.col,
                            witness=BASE)

    for fam in FAMILIES:
        rules = [r for r in spec.rules if r.family == fam]
        # determinism: patterns pairwise disjoint
        for i, a in enumerate(rules):
            for b in rules[i + 1:]:
                point = []
                for pa, pb, m in zip(a.pattern, b.pattern, mins):
                    lo_a, hi_a = _interval(pa, m)
                    lo_b, hi_b = _interval(pb, m)
                    lo = max(lo_a, lo_b)
                    hi = min(h for h in (hi_a, hi_b) if h is not None) if (hi_a, hi_b) != (None, None) else None
                    if hi is not None and lo > hi:
                        break
                    point.append(lo)
                else:
                    raise ScheduleError("E_OVERLAP", f"'{a}' and '{b}' both match", b.line, b.col,
                                        witness=_witness(mode, fam, point))
        # totality: test one representative per cell of the breakpoint grid
        cuts = []
        for s, m in enumerate(mins):
            pts = {m}
            for r in rules:
                lo, hi = _interval(r.pattern[s], m)
                pts.add(lo)
                if hi is not None:
                    pts.add(hi + 1)
            cuts.append(sorted(p for p in pts if p >= m))
        for point in product(*cuts):
            if not any(r.matches(fam, point) for r in rules):
                raise ScheduleError("E_GAP", f"no rule covers {_witness(mode, fam, point)}",
                                    witness=_witness(mode, fam, point))


def _check_rule_shape(rule: Rule, mode: str, mins: tuple[int, ...], arity: int) -> None:
    if rule.family == BASE:
        if rule.pattern:
            raise ScheduleError("E_SYNTAX", "BASE takes no index", rule.line, rule.col)
    elif rule.family not in FAMILIES:
        raise ScheduleError("E_SYNTAX", f"unknown family {rule.family!r}", rule.line, rule.col)
    elif len(rule.pattern) != arity:
        raise ScheduleError("E_SYNTAX", f"{mode} mode expects {arity} index slot(s)", rule.line, rule.col)
    if rule.target_family == BASE:
        if rule.target:
            raise ScheduleError("E_SYNTAX", "BASE takes no index", rule.line, rule.col)
    elif rule.target_family not in FAMILIES:
        raise ScheduleError("E_SYNTAX", f"unknown family {rule.target_family!r}", rule.line, rule.col)
    elif len(rule.target) != arity:
        raise ScheduleError("E_SYNTAX", f"{mode} mode expects {arity} index slot(s)", rule.line, rule.col)

    names = [p.var for p in rule.pattern if p.var is not None]
    if len(set(names)) != len(names):
        raise ScheduleError("E_SYNTAX", f"repeated variable in '{rule}'", rule.line, rule.col)

    for s, (pat, m) in enumerate(zip(rule.pattern, mins)):
        lo = pat.lower(m)
        if lo < m:
            src = [p.lower(mm) for p, mm in zip(rule.pattern, mins)]
            raise ScheduleError("E_DOMAIN", f"slot {s + 1} of '{rule}' admits {lo} < {m}", rule.line, rule.col,
                                witness=_witness(mode, rule.family, src))

    if rule.target_family == BASE:
        return
    slot_of = {p.var: s for s, p in enumerate(rule.pattern) if p.var is not None}
    source_min = [p.lower(m) for p, m in zip(rule.pattern, mins)]
    for s, (t, m) in enumerate(zip(rule.target, mins)):
        if isinstance(t, Abs):
            if t.value < m:
                raise ScheduleError("E_DOMAIN", f"target slot {s + 1} of '{rule}' is {t.value} < {m}",
                                    rule.line, rule.col, witness=_witness(mode, rule.family, source_min))
            continue
        if t.var not in slot_of:
            raise ScheduleError("E_DOMAIN", f"variable {t.var!r} in '{rule}' is not bound by the pattern",
                                rule.line, rule.col)
        if slot_of[t.var] != s:
            # index maps stay slot-wise translations; the escape analysis relies on it
            raise ScheduleError("E_DOMAIN", f"variable {t.var!r} is used outside its own slot in '{rule}'",
                                rule.line, rule.col)
        if source_min[s] + t.offset < m:
            raise ScheduleError("E_DOMAIN",
                                f"'{rule}' sends {_witness(mode, rule.family, source_min)} to index "
                                f"{source_min[s] + t.offset} < {m}",
                                rule.line, rule.col, witness=_witness(mode, rule.family, source_min))


# -- composition ---------------------------------------------------------------


@dataclass(frozen=True)
class Composition:
    """Apply ``steps[0]`` first, then ``steps[1]``, and so on.

    ``compose(f, g)`` therefore represents ``g o f``.
    """

    steps: tuple[TransitionSpec, ...]
    name: str

    @property
    def mode(self) -> str:
        return self.steps[0].mode

    @property
    def max_constant(self) -> int:
        return max(s.max_constant for s in self.steps)

    def slots_of(self, r: Region):
        return self.steps[0].slots_of(r)

    def region_of(self, family: str, slots):
        return self.steps[0].region_of(family, slots)

    def step_raw(self, family, slots):
        for s in self.steps:
            family, slots = s.step_raw(family, slots)
        return family, slots

    def apply(self, r: Region) -> Region:
        fam, slots = self.slots_of(r)
        return self.region_of(*self.step_raw(fam, slots))

    def __call__(self, r: Region) -> Region:
        return self.apply(r)

    def regions(self, max_index: int) -> list[Region]:
        return self.steps[0].regions(max_index)


Map = Union[TransitionSpec, Composition]


def compose(first: Map, second: Map, name: str | None = None) -> Composition:
    """The map ``second o first``."""
    if first.mode != second.mode:
        raise ScheduleError("E_MODE_MISMATCH", f"cannot compose {first.mode} with {second.mode} schedules")
    return Composition(tuple(first.steps) + tuple(second.steps),
                       name or f"{second.name}.{first.name}")


def identity_spec(mode: str = "linear") -> TransitionSpec:
    if mode == "linear":
        slots, tgt = (Free("k"),), (Var("k"),)
    else:
        slots, tgt = (Free("p"), Free("q")), (Var("p"), Var("q"))
    return TransitionSpec(
        "id",
        mode,
        (
            Rule(BASE, (), BASE, ()),
            Rule("G", slots, "G", tgt),
            Rule("B", slots, "B", tgt),
        ),
    )
