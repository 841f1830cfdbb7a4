"""Matplotlib figures written next to CLI reports (``--figures DIR``)."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

from .analytic import modulus_radius, sup_image_deviation  # noqa: E402
from .theorems import MAP_NAMES  # noqa: E402

__all__ = ["KIND_COLORS", "plot_table", "plot_verify", "plot_modulus"]

KIND_COLORS = {"periodic": "#2e86de", "preperiodic": "#f39c12", "wandering": "#c0392b"}
_KINDS = list(KIND_COLORS)


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    # fixed metadata keeps repeated runs byte-stable
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_table(rows: Sequence, mode: str, title: str, path: Path) -> Path:
    """Heatmap of kinds: one column per region, one row per map."""
    grid = np.array([[_KINDS.index(row.kinds[m].kind) for row in rows] for m in MAP_NAMES])
    fig, ax = plt.subplots(figsize=(max(6.0, 0.18 * len(rows)), 2.6))
    ax.imshow(grid, cmap=ListedColormap([KIND_COLORS[k] for k in _KINDS]), vmin=0, vmax=2, aspect="auto")
    ax.set_yticks(range(len(MAP_NAMES)), MAP_NAMES)
    step = max(1, len(rows) // 30)
    ticks = list(range(0, len(rows), step))
    ax.set_xticks(ticks, [rows[i].region.label(mode) for i in ticks], rotation=90, fontsize=7)
    ax.set_title(title)
    handles = [plt.Rectangle((0, 0), 1, 1, color=KIND_COLORS[k]) for k in _KINDS]
    ax.legend(handles, _KINDS, loc="upper center", bbox_to_anchor=(0.5, -0.45), ncol=3, fontsize=8)
    fig.tight_layout()
    return _save(fig, path)


def plot_verify(reports: Sequence, path: Path) -> Path:
    """Passed and failed checks per construction."""
    names = [r.theorem for r in reports]
    passed = [r.summary()["passed"] for r in reports]
    failed = [r.summary()["failed"] for r in reports]
    fig, ax = plt.subplots(figsize=(7.0, 3.2))
    x = np.arange(len(names))
    ax.bar(x, passed, color="#27ae60", label="passed")
    ax.bar(x, failed, bottom=passed, color="#c0392b", label="failed")
    ax.set_xticks(x, names)
    ax.set_ylabel("region checks")
    ax.legend(fontsize=8)
    fig.tight_layout()
    return _save(fig, path)


def plot_modulus(c_abs: int, path: Path) -> Path:
    """Worst image deviation against ball radius, with the admissible radius marked."""
    r_star = modulus_radius(c_abs)
    radii = np.linspace(0.0, 2.0 * r_star, 200)
    fig, ax = plt.subplots(figsize=(5.0, 3.2))
    ax.plot(radii, [sup_image_deviation(c_abs, r) for r in radii], color="#2e86de")
    ax.axhline(0.5, color="#777777", linestyle="--", linewidth=1)
    ax.axvline(r_star, color="#c0392b", linewidth=1)
    ax.set_xlabel("radius")
    ax.set_ylabel("max |exp(w) - c|")
    ax.set_title(f"|c| = {c_abs}")
    fig.tight_layout()
    return _save(fig, path)
