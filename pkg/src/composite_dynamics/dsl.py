"""Parser for schedule files.

Grammar (one rule per line, ``#`` starts a comment)::

    spec    := "mode" "=" ("linear"|"grid") section+
    section := "[" name "]" rule+
    rule    := lhs "->" rhs
    lhs     := "BASE" | fam "[" pat ("," pat)? "]"
    fam     := "G" | "B"
    pat     := INT | IDENT | IDENT ">=" INT
    rhs     := "BASE" | fam "[" expr ("," expr)? "]"
    expr    := INT | IDENT | IDENT ("+"|"-") INT
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .geometry import BASE
from .schedule import Abs, Exact, Free, Guard, Rule, ScheduleError, TransitionSpec, Var

__all__ = ["ScheduleFile", "parse_file", "parse_spec", "tokenize"]

_TOKEN = re.compile(r"\s*(?:(?P<arrow>->)|(?P<ge>>=)|(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[\[\],=+\-]))")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    col: int


def tokenize(line: str, lineno: int) -> list[Token]:
    out = []
    pos = 0
    n = len(line)
    while pos < n:
        if line[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(line, pos)
        if not m or m.end() == pos:
            raise ScheduleError("E_SYNTAX", f"unexpected character {line[pos]!r}", lineno, pos + 1)
        kind = m.lastgroup
        text = m.group(kind)
        out.append(Token(kind if kind != "op" else text, text, m.start(kind) + 1))
        pos = m.end()
    return out


class _LineParser:
    def __init__(self, tokens: list[Token], lineno: int, line: str):
        self.toks = tokens
        self.i = 0
        self.lineno = lineno
        self.end_col = len(line.rstrip()) + 1

    def peek(self) -> Optional[Token]:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def fail(self, expected: str):
        tok = self.peek()
        col = tok.col if tok else self.end_col
        got = repr(tok.text) if tok else "end of line"
        raise ScheduleError("E_SYNTAX", f"expected {expected}, got {got}", self.lineno, col)

    def take(self, kind: str, expected: str | None = None) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != kind:
            self.fail(expected or repr(kind))
        self.i += 1
        return tok

    def at(self, kind: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == kind

    def done(self) -> None:
        if self.peek() is not None:
            self.fail("end of line")

    def family(self) -> tuple[str, int]:
        tok = self.take("ident", "'BASE', 'G' or 'B'")
        if tok.text not in (BASE, "G", "B"):
            self.i -= 1
            self.fail("'BASE', 'G' or 'B'")
        return tok.text, tok.col

    def slots(self, item) -> tuple:
        self.take("[", "'['")
        out = [item()]
        while self.at(","):
            self.i += 1
            out.append(item())
        self.take("]", "']' or ','")
        return tuple(out)

    def pat(self):
        if self.at("int"):
            return Exact(int(self.take("int").text))
        name = self.take("ident", "an integer or a variable").text
        if self.at("ge"):
            self.i += 1
            return Guard(name, int(self.take("int", "an integer bound").text))
        return Free(name)

    def expr(self):
        if self.at("int"):
            return Abs(int(self.take("int").text))
        name = self.take("ident", "an integer or a variable").text
        if self.at("+") or self.at("-"):
            sign = 1 if self.take(self.peek().kind).text == "+" else -1
            return Var(name, sign * int(self.take("int", "an integer offset").text))
        return Var(name)

    def rule(self) -> Rule:
        fam, col = self.family()
        pattern = () if fam == BASE else self.slots(self.pat)
        self.take("arrow", "'->'")
        tfam, _ = self.family()
        target = () if tfam == BASE else self.slots(self.expr)
        self.done()
        return Rule(fam, pattern, tfam, target, self.lineno, col)


@dataclass(frozen=True)
class ScheduleFile:
    mode: str
    specs: dict[str, TransitionSpec]

    def __getitem__(self, name: str) -> TransitionSpec:
        return self.specs[name]


def _strip(line: str) -> str:
    return line.split("#", 1)[0]


def parse_file(text: str) -> ScheduleFile:
    """Parse every section of a schedule file into validated specs."""
    mode: str | None = None
    sections: list[tuple[str, int, list[Rule]]] = []
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line.strip():
            continue
        last_line = lineno
        toks = tokenize(line, lineno)
        p = _LineParser(toks, lineno, line)
        if mode is None:
            tok = p.take("ident", "'mode'")
            if tok.text != "mode":
                raise ScheduleError("E_SYNTAX", "file must start with 'mode = linear|grid'", lineno, tok.col)
            p.take("=", "'='")
            m = p.take("ident", "'linear' or 'grid'")
            if m.text not in ("linear", "grid"):
                raise ScheduleError("E_SYNTAX", f"unknown mode {m.text!r}", lineno, m.col)
            p.done()
            mode = m.text
            continue
        if p.at("["):
            p.i += 1
            name = p.take("ident", "a section name").text
            p.take("]", "']'")
            p.done()
            if any(name == s[0] for s in sections):
                raise ScheduleError("E_SYNTAX", f"duplicate section [{name}]", lineno, toks[0].col)
            sections.append((name, lineno, []))
            continue
        if not sections:
            raise ScheduleError("E_SYNTAX", "rule outside of a [section]", lineno, toks[0].col)
        sections[-1][2].append(p.rule())

    if mode is None:
        raise ScheduleError("E_SYNTAX", "missing 'mode = linear|grid'", 1, 1)
    if not sections:
        raise ScheduleError("E_SYNTAX", "no [section] found", last_line or 1, 1)
    specs = {}
    for name, lineno, rules in sections:
        if not rules:
            raise ScheduleError("E_SYNTAX", f"section [{name}] has no rules", lineno, 1)
        specs[name] = TransitionSpec(name, mode, tuple(rules))
    return ScheduleFile(mode, specs)


def parse_spec(text: str, name: str | None = None) -> TransitionSpec:
    """Parse a schedule and return one section (the only one, or ``name``)."""
    sf = parse_file(text)
    if name is not None:
        if name not in sf.specs:
            raise KeyError(f"no section [{name}]")
        return sf.specs[name]
    if len(sf.specs) != 1:
        raise ValueError(f"schedule has sections {sorted(sf.specs)}; pick one by name")
    return next(iter(sf.specs.values()))
