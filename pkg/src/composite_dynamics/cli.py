"""Command-line front end.

Verbs: validate, classify, table, verify, modulus, check-family, diagram.
Every verb prints text (default), a JSON document (``--format json``) or
CSV rows (``--format csv``).  ``--figures DIR`` on table, verify and
modulus additionally renders PNG figures into DIR.

Exit codes: 0 ok, 1 claim or check failure, 2 syntax or usage error,
3 semantic schedule error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .analytic import modulus_radius, sampled_crossing, sup_image_deviation
from .dsl import parse_file
from .dynamics import (
    GRID_PROBE_MAX,
    LINEAR_PROBE_MAX,
    classify,
    classify_table,
    maps_for,
    probe_regions,
    verify_claims,
)
from .geometry import STANDARD_FAMILY, CarlemanFamily, Region, verify_structure
from .schedule import ScheduleError
from .svg import emit_diagram
from .theorems import MAP_NAMES, THEOREM_IDS, builtin, resolve_theorem

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_SYNTAX, EXIT_SEMANTIC, EXIT_IO = 0, 1, 2, 3, 4
MODULUS_AGREEMENT = 1e-6

FIXTURES = {
    "standard": STANDARD_FAMILY,
    "half-plane": CarlemanFamily(g_shape="half_plane"),
    "overlap": CarlemanFamily(extra_disks=((7, 1),)),
}


class UsageError(Exception):
    pass


def _document(verb: str, inputs: dict, parameters: dict, rows: list, summary: dict, **extra) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "tool": "composite-dynamics",
        "version": __version__,
        "verb": verb,
        "inputs": inputs,
        "parameters": parameters,
        "rows": rows,
        "summary": summary,
    }
    doc.update(extra)
    return doc


def _emit(args, doc: dict, text_lines: list[str], columns: Optional[list[str]] = None) -> None:
    out = args.stdout
    if args.format == "json":
        out.write(json.dumps(doc, indent=2) + "\n")
    elif args.format == "csv":
        cols = columns or (list(doc["rows"][0]) if doc["rows"] else [])
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for row in doc["rows"]:
            writer.writerow({k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in row.items()})
        out.write(buf.getvalue())
    else:
        out.write("\n".join(text_lines) + "\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _error_doc(verb: str, inputs: dict, err: ScheduleError) -> dict:
    return _document(verb, inputs, {}, [], {"valid": False}, error=err.to_dict())


def _schedule_exit(err: ScheduleError) -> int:
    return EXIT_SYNTAX if err.is_syntax else EXIT_SEMANTIC


# -- verbs ---------------------------------------------------------------------


def cmd_validate(args) -> int:
    inputs = {"file": args.file}
    try:
        sf = parse_file(_read(args.file))
    except ScheduleError as err:
        _emit(args, _error_doc("validate", inputs, err), [f"{args.file}:{err}"], ["code", "line", "col", "witness"])
        return _schedule_exit(err)
    rows = [{"section": name, "mode": spec.mode, "rules": len(spec.rules), "max_constant": spec.max_constant}
            for name, spec in sf.specs.items()]
    lines = [f"{args.file}: valid {sf.mode} schedule"]
    lines += [f"  [{r['section']}] {r['rules']} rules, largest constant {r['max_constant']}" for r in rows]
    _emit(args, _document("validate", inputs, {}, rows, {"valid": True, "sections": len(rows)}), lines)
    return EXIT_OK


def _maps_from_args(args):
    """Return (maps dict, mode, inputs, user_spec flag)."""
    if args.theorem:
        tid = resolve_theorem(args.theorem)
        f, g = builtin(tid)
        return maps_for(f, g), f.mode, {"theorem": tid}, False
    sf = parse_file(_read(args.spec))
    specs = dict(sf.specs)
    if "f" in specs and "g" in specs:
        maps = maps_for(specs["f"], specs["g"])
    elif len(specs) == 1 and args.map == "f":
        maps = {"f": next(iter(specs.values()))}
    else:
        raise UsageError(f"{args.spec} must define [f] and [g] sections for map {args.map}")
    if args.map not in maps:
        raise UsageError(f"map {args.map} is not available from {args.spec}")
    return maps, sf.mode, {"spec": args.spec}, True


SCOPE_NOTE = "region schedule classification"
USER_NOTE = "schedule-level only: user-authored schedule, no component-level claim"


def cmd_classify(args) -> int:
    maps, mode, inputs, user = _maps_from_args(args)
    region = Region.parse(args.region)
    result = classify(maps[args.map], region)
    inputs.update({"region": region.label(mode), "map": args.map})
    row = {"region": region.label(mode), "map": args.map, **result.to_dict(mode)}
    note = USER_NOTE if user else SCOPE_NOTE
    lines = [f"{region.label(mode)} under {args.map}: {result}  ({note})"]
    if result.kind == "wandering":
        cert = result.certificate
        lines.append(f"  transient: {' -> '.join(r.label(mode) for r in cert.transient) or '(none)'}")
        lines.append(f"  cycle from {cert.cycle_start.label(mode)}, net shift {cert.net_shift}:")
        lines += [f"    {' ; '.join(e.rules)}  shift {list(e.shift)}" for e in cert.cycle]
    doc = _document("classify", inputs, {}, [row], {"kind": result.kind}, note=note)
    _emit(args, doc, lines, ["region", "map", "kind", "period", "tail"])
    return EXIT_OK


def _bound(mode: str, max_index: Optional[int]) -> dict:
    if mode == "linear":
        return {"linear_max": max_index or LINEAR_PROBE_MAX}
    return {"grid_max": max_index or GRID_PROBE_MAX}


def cmd_table(args) -> int:
    tid = resolve_theorem(args.theorem)
    f, g = builtin(tid)
    params = _bound(f.mode, args.max_index)
    rows = classify_table(f, g, probe_regions(f.mode, **params))
    out_rows = []
    lines = [f"construction {tid} ({f.mode} mode), {SCOPE_NOTE}",
             f"{'region':<10}" + "".join(f"{m:<26}" for m in MAP_NAMES)]
    for row in rows:
        rec = {"region": row.region.label(f.mode)}
        for m in MAP_NAMES:
            rec[m] = row.kinds[m].kind
        rec["detail"] = {m: row.kinds[m].to_dict(f.mode) for m in MAP_NAMES if row.kinds[m].kind != "wandering"}
        out_rows.append(rec)
        lines.append(f"{rec['region']:<10}" + "".join(f"{str(row.kinds[m]):<26}" for m in MAP_NAMES))
    figures = []
    if args.figures:
        from .plotting import plot_table

        path = plot_table(rows, f.mode, f"construction {tid}", Path(args.figures) / f"table_{tid}.png")
        figures.append(str(path))
        lines.append(f"figure: {path}")
    doc = _document("table", {"theorem": tid}, params, out_rows, {"rows": len(out_rows)},
                    note=SCOPE_NOTE, figures=figures)
    _emit(args, doc, lines, ["region", *MAP_NAMES])
    return EXIT_OK


def _pattern_label(pattern: str, mode: str) -> str:
    return pattern.replace("[", "(").replace("]", ")") if mode == "grid" else pattern


def cmd_verify(args) -> int:
    ids = THEOREM_IDS if args.theorem == "all" else (resolve_theorem(args.theorem),)
    reports = [verify_claims(tid) for tid in ids]
    rows = []
    for rep in reports:
        for source, pattern, m, kind in rep.assertions():
            checks = [c for c in rep.checks if (c.source, c.pattern, c.map, c.expected) == (source, pattern, m, kind)]
            failing = [c.region.label(rep.mode) for c in checks if not c.passed]
            rows.append({
                "theorem": rep.theorem,
                "source": source,
                "pattern": _pattern_label(pattern, rep.mode),
                "map": m,
                "expected": kind,
                "instances": len(checks),
                "passed": not failing,
                "failing_regions": failing,
            })
    n_pass = sum(r["passed"] for r in rows)
    summary = {"rows": len(rows), "passed": n_pass, "failed": len(rows) - n_pass,
               "region_checks": sum(len(r.checks) for r in reports)}
    lines = [f"{SCOPE_NOTE}; probe: linear k <= {LINEAR_PROBE_MAX}, grid p <= {GRID_PROBE_MAX}, q <= {GRID_PROBE_MAX}"]
    for r in rows:
        status = "PASS" if r["passed"] else "FAIL " + ",".join(r["failing_regions"])
        lines.append(f"{r['theorem']:<5} {r['source']:<13} {r['pattern']}: {r['expected']} under {r['map']}"
                     f"  [{r['instances']} regions]  {status}")
    lines.append(f"{n_pass}/{len(rows)} assertions pass")
    figures = []
    if args.figures:
        from .plotting import plot_verify

        path = plot_verify(reports, Path(args.figures) / f"verify_{args.theorem}.png")
        figures.append(str(path))
        lines.append(f"figure: {path}")
    params = {"linear_max": LINEAR_PROBE_MAX, "grid_max": GRID_PROBE_MAX}
    doc = _document("verify", {"theorem": args.theorem}, params, rows, summary, note=SCOPE_NOTE, figures=figures)
    _emit(args, doc, lines, ["theorem", "source", "pattern", "map", "expected", "instances", "passed"])
    return EXIT_OK if n_pass == len(rows) else EXIT_FAIL


def cmd_modulus(args) -> int:
    c = args.center
    if abs(c) < 2:
        raise UsageError("--center must satisfy |c| >= 2")
    radius = modulus_radius(abs(c))
    crossing = sampled_crossing(c)
    diff = abs(radius - crossing)
    agrees = diff <= MODULUS_AGREEMENT
    row = {
        "center": c,
        "radius": radius,
        "oracle_crossing": crossing,
        "difference": diff,
        "agrees": agrees,
        "sup_deviation_at_radius": sup_image_deviation(abs(c), radius),
    }
    lines = [f"centre {c}: radius {radius:.12f}", f"grid oracle crossing {crossing:.12f} (difference {diff:.2e})",
             "agreement" if agrees else "DISAGREEMENT"]
    figures = []
    if args.figures:
        from .plotting import plot_modulus

        path = plot_modulus(abs(c), Path(args.figures) / f"modulus_{c}.png")
        figures.append(str(path))
        lines.append(f"figure: {path}")
    doc = _document("modulus", {"center": c}, {"tolerance": MODULUS_AGREEMENT}, [row], {"agrees": agrees},
                    figures=figures)
    _emit(args, doc, lines)
    return EXIT_OK if agrees else EXIT_FAIL


def cmd_check_family(args) -> int:
    cert = verify_structure(FIXTURES[args.fixture], args.window, args.step)
    d = cert.to_dict()
    rows = [
        {"condition": "i", "passed": cert.condition_i},
        {"condition": "ii", "passed": cert.condition_ii},
        {"condition": "iii", "passed": cert.condition_iii},
        {"condition": "disjoint", "passed": cert.disjoint},
    ]
    lines = [f"family {args.fixture}, window {args.window}, step {args.step}: {cert.status}"]
    lines += [f"  condition {r['condition']}: {'witnessed' if r['passed'] else 'FAILED'}" for r in rows]
    lines.append(f"  min gap {d['min_gap']} between {cert.closest_pair[0]} and {cert.closest_pair[1]}")
    lines += [f"  {msg}" for msg in cert.failures]
    doc = _document("check-family", {"fixture": args.fixture}, {"window": args.window, "step": args.step}, rows,
                    {"status": cert.status}, certificate=d)
    _emit(args, doc, lines)
    return EXIT_OK if cert.passed else EXIT_FAIL


def cmd_diagram(args) -> int:
    tid = resolve_theorem(args.theorem)
    text = emit_diagram(tid, args.window)
    try:
        Path(args.out).write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {args.out}: {exc.strerror or exc}") from exc
    doc = _document("diagram", {"theorem": tid}, {"window": args.window}, [{"out": args.out, "bytes": len(text)}],
                    {"written": True})
    _emit(args, doc, [f"wrote {args.out} ({len(text)} bytes)"])
    return EXIT_OK


# -- parser --------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default=argparse.SUPPRESS)

    parser = _Parser(prog="composite-dynamics", description="Region schedules, orbit classes and checks.",
                     parents=[common])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", parents=[common], help="parse and validate a schedule file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("classify", parents=[common], help="classify one region's orbit")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--theorem")
    src.add_argument("--spec")
    p.add_argument("--region", required=True)
    p.add_argument("--map", choices=MAP_NAMES, default="f")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("table", parents=[common], help="classify every probe region under f, g, gf, fg")
    p.add_argument("--theorem", required=True)
    p.add_argument("--max-index", type=int)
    p.add_argument("--figures", metavar="DIR")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", parents=[common], help="check the stated claims of a construction")
    p.add_argument("--theorem", required=True, help="construction id, shape alias, or 'all'")
    p.add_argument("--figures", metavar="DIR")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("modulus", parents=[common], help="admissible radius for a target centre")
    p.add_argument("--center", type=int, required=True)
    p.add_argument("--figures", metavar="DIR")
    p.set_defaults(func=cmd_modulus)

    p = sub.add_parser("check-family", parents=[common], help="discrete witness for the region family")
    p.add_argument("--window", type=float, default=30.0)
    p.add_argument("--step", type=float, default=0.1)
    p.add_argument("--fixture", choices=sorted(FIXTURES), default="standard")
    p.set_defaults(func=cmd_check_family)

    p = sub.add_parser("diagram", parents=[common], help="write an SVG diagram of a construction")
    p.add_argument("--theorem", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--window", type=float, default=30.0)
    p.set_defaults(func=cmd_diagram)
    return parser


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_SYNTAX
    if not hasattr(args, "format"):
        args.format = "text"
    args.stdout = stdout
    try:
        return args.func(args)
    except ScheduleError as err:
        stderr.write(f"error: {err}\n")
        return _schedule_exit(err)
    except (UsageError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        stderr.write(f"error: {msg}\n")
        return EXIT_SYNTAX
    except OSError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_IO


def main() -> None:
    sys.exit(run())
