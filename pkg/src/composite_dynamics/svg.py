"""Static SVG 1.1 diagrams of the region layout with schedule arrows.

Output is byte-identical for identical inputs: coordinates are printed with
two decimals and every element is emitted in sorted region order.
"""

from __future__ import annotations

from typing import Union
from xml.sax.saxutils import escape

from .geometry import Region, center
from .theorems import builtin, resolve_theorem

__all__ = ["DEFAULT_WINDOW", "SCALE", "emit_diagram", "normalize_window"]

DEFAULT_WINDOW = (-30.0, 30.0, -30.0, 30.0)
SCALE = 10.0  # pixels per unit

ARROW_STYLE = {
    "f": {"color": "#1f5fbf", "dash": "", "bend": 1.0},
    "g": {"color": "#c0392b", "dash": ' stroke-dasharray="6 3"', "bend": -1.0},
}

Window = Union[float, tuple[float, float, float, float]]


def normalize_window(window: Window) -> tuple[float, float, float, float]:
    if isinstance(window, (int, float)):
        w = float(window)
        return (-w, w, -w, w)
    xmin, xmax, ymin, ymax = (float(v) for v in window)
    if xmax < xmin or ymax < ymin:
        raise ValueError("window bounds are reversed")
    return xmin, xmax, ymin, ymax


def _n(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


class _Canvas:
    def __init__(self, box: tuple[float, float, float, float]):
        self.xmin, self.xmax, self.ymin, self.ymax = box
        self.width = (self.xmax - self.xmin) * SCALE
        self.height = (self.ymax - self.ymin) * SCALE

    def px(self, x: float) -> float:
        return (x - self.xmin) * SCALE

    def py(self, y: float) -> float:
        return (self.ymax - y) * SCALE

    def inside(self, x: float, y: float = 0.0) -> bool:
        return self.xmin <= x <= self.xmax and self.ymin <= y <= self.ymax


def _header(c: _Canvas, title: str) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_n(c.width)}" '
        f'height="{_n(c.height)}" viewBox="0 0 {_n(c.width)} {_n(c.height)}">',
        f"<title>{escape(title)}</title>",
    ]


def _markers() -> list[str]:
    out = ["<defs>"]
    for name, style in ARROW_STYLE.items():
        out.append(
            f'<marker id="head-{name}" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" '
            f'markerHeight="6" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="{style["color"]}"/></marker>'
        )
    out.append("</defs>")
    return out


def _layout(c: _Canvas, max_k: int, labels: dict[int, tuple[str, str]]) -> list[str]:
    out = ['<g id="regions" fill="#eeeeee" stroke="#333333" stroke-width="1">']
    disks = [(2, "G0")]
    for k in range(1, max_k + 1):
        disks.append((4 * k + 2, labels[k][0]))
        disks.append((-(4 * k + 2), labels[k][1]))
    for x, label in sorted(disks):
        if x + 1 < c.xmin or x - 1 > c.xmax or c.ymin > 1 or c.ymax < -1:
            continue
        out.append(f'<circle cx="{_n(c.px(x))}" cy="{_n(c.py(0))}" r="{_n(SCALE)}"><title>{label}</title></circle>')
        if x == 2 or not (c.xmin <= x <= c.xmax):
            continue
        if c.ymax > 1:
            out.append(f'<line x1="{_n(c.px(x))}" y1="{_n(c.py(1))}" x2="{_n(c.px(x))}" y2="{_n(c.py(c.ymax))}"/>')
        if c.ymin < -1:
            out.append(f'<line x1="{_n(c.px(x))}" y1="{_n(c.py(-1))}" x2="{_n(c.px(x))}" y2="{_n(c.py(c.ymin))}"/>')
    out.append("</g>")
    out.append('<g id="lines" stroke="#777777" stroke-width="1">')
    for k in range(1, max_k + 1):
        for x in sorted((-4 * k, 4 * k)):
            if c.xmin <= x <= c.xmax:
                out.append(f'<line x1="{_n(c.px(x))}" y1="{_n(c.py(c.ymax))}" x2="{_n(c.px(x))}" y2="{_n(c.py(c.ymin))}"/>')
    out.append("</g>")
    return out


def _arrow(c: _Canvas, name: str, x0: float, x1: float) -> str:
    style = ARROW_STYLE[name]
    bend = style["bend"]
    if x0 == x1:
        # self-map: small loop above (f) or below (g) the disk
        y = 1.0 * bend
        d = (f"M{_n(c.px(x0 - 0.5))},{_n(c.py(y))} C{_n(c.px(x0 - 1.5))},{_n(c.py(3 * y))} "
             f"{_n(c.px(x0 + 1.5))},{_n(c.py(3 * y))} {_n(c.px(x0 + 0.5))},{_n(c.py(y))}")
    else:
        lift = bend * min(8.0, 1.0 + abs(x1 - x0) / 4)
        mid = (x0 + x1) / 2
        d = (f"M{_n(c.px(x0))},{_n(c.py(bend))} Q{_n(c.px(mid))},{_n(c.py(lift + bend))} "
             f"{_n(c.px(x1))},{_n(c.py(bend))}")
    return (f'<path d="{d}" fill="none" stroke="{style["color"]}" stroke-width="1.5"{style["dash"]} '
            f'marker-end="url(#head-{name})"/>')


def emit_diagram(theorem_id: str, window: Window = DEFAULT_WINDOW) -> str:
    """SVG text for one construction: disks, rays and lines, plus f and g arrows.

    ``f`` arrows are solid blue and arc above the real axis; ``g`` arrows are
    dashed red and arc below.  A rule instance gets an arrow when both its
    source and target disk centres lie in the window.
    """
    tid = resolve_theorem(theorem_id)
    box = normalize_window(window)
    c = _Canvas(box)
    f, g = builtin(tid)
    title = f"construction {tid} region layout"
    if c.width == 0 or c.height == 0:
        return "\n".join(_header(c, title) + ["</svg>"]) + "\n"

    extent = max(abs(box[0]), abs(box[1]))
    max_k = max(0, int((extent + 1 - 2) // 4) + 1)
    labels = {k: (Region("G", k).label(f.mode), Region("B", k).label(f.mode)) for k in range(1, max_k + 1)}

    out = _header(c, title) + _markers()
    out += _layout(c, max_k, labels)
    out.append('<g id="arrows">')
    sources = [Region.base()] + [Region(fam, k) for fam in ("G", "B") for k in range(1, max_k + 1)]
    for name, spec in (("f", f), ("g", g)):
        for src in sorted(sources):
            dst = spec.apply(src)
            x0, x1 = center(src), center(dst)
            if not (c.inside(x0) and c.inside(x1)):
                continue
            label = f"{name}: {src.label(spec.mode)} -> {dst.label(spec.mode)}"
            out.append(f"<g><title>{escape(label)}</title>{_arrow(c, name, x0, x1)}</g>")
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
