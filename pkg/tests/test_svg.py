import re
import xml.dom.minidom
from pathlib import Path

import pytest

from composite_dynamics.svg import emit_diagram

GOLDEN = Path(__file__).parent / "fixtures" / "diagram_2_5.svg"


def circles(svg):
    return [(float(x), float(y), float(r)) for x, y, r in re.findall(r'<circle cx="([\d.]+)" cy="([\d.]+)" r="([\d.]+)"', svg)]


def test_golden_file():
    assert emit_diagram("2.5", 30) == GOLDEN.read_text()


def test_deterministic():
    assert emit_diagram("2.11") == emit_diagram("2.11")


def test_disk_centres_and_radius():
    svg = emit_diagram("2.5", (-30, 30, -30, 30))
    xml.dom.minidom.parseString(svg)
    # pixel x = (centre + 30) * 10, radius 1 unit = 10 px
    centres = sorted(round(x / 10 - 30) for x, _, _ in circles(svg))
    for k in range(1, 7):
        assert 4 * k + 2 in centres and -(4 * k + 2) in centres
    assert 2 in centres
    assert {r for _, _, r in circles(svg)} == {10.0}


def test_grid_arrows():
    svg = emit_diagram("2.1", 30)
    for q in (1, 2, 3):
        assert f"f: G(0,{q}) -&gt; B(0,{q})" in svg


def test_f_and_g_styles_differ():
    svg = emit_diagram("2.5", 30)
    assert 'marker-end="url(#head-f)"' in svg and 'marker-end="url(#head-g)"' in svg
    assert "stroke-dasharray" in svg


def test_empty_window():
    svg = emit_diagram("2.5", (0, 0, 0, 0))
    doc = xml.dom.minidom.parseString(svg)
    assert doc.documentElement.tagName == "svg"
    assert "<circle" not in svg and "<path" not in svg


def test_reversed_window():
    with pytest.raises(ValueError):
        emit_diagram("2.5", (10, -10, 0, 1))
