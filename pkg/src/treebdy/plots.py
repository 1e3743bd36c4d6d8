"""Figures for the report directory.  Uses the non-interactive Agg backend."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .cover import CoverSlice, cone_measure  # noqa: E402
from .distributions import Distribution  # noqa: E402
from .graph import Graph  # noqa: E402

plt.rcParams["savefig.bbox"] = "tight"


def _leaf_angles(slice: CoverSlice) -> dict[tuple[int, ...], float]:
    """Angle for every node: leaves spread evenly, parents at their children's mean."""
    leaves = [p for p in slice.nodes if not slice.children[p]]
    angle = {p: 2 * math.pi * i / max(len(leaves), 1) for i, p in enumerate(sorted(leaves))}
    for p in sorted(slice.nodes, key=len, reverse=True):
        if p not in angle:
            kids = slice.children[p]
            angle[p] = sum(angle[k] for k in kids) / len(kids)
    return angle


def plot_cover(slice: CoverSlice, dist: Distribution | None, path: str | Path, label_depth: int = 2) -> Path:
    """Radial drawing of a cover slice; cone masses label the first levels."""
    g = slice.graph
    angle = _leaf_angles(slice)

    def xy(p):
        r = len(p)
        return r * math.cos(angle[p]), r * math.sin(angle[p])

    fig, ax = plt.subplots(figsize=(7, 7))
    for p in slice.cones():
        (x0, y0), (x1, y1) = xy(p[:-1]), xy(p)
        ax.plot([x0, x1], [y0, y1], color="0.3", lw=max(0.3, 1.6 - 0.25 * len(p)))
        if len(p) <= label_depth:
            text = g.edge_name(p[-1])
            if dist is not None:
                text += f" ({dist.group.format(cone_measure(slice, dist, p))})"
            ax.annotate(text, ((x0 + x1) / 2, (y0 + y1) / 2), fontsize=7, ha="center", va="center",
                        bbox=dict(boxstyle="round,pad=0.1", fc="white", ec="none", alpha=0.8))
    ax.plot([0], [0], "ko", ms=5)
    ax.annotate(g.vertices[slice.base], (0, 0), xytext=(4, 4), textcoords="offset points", fontsize=8)
    ax.set_aspect("equal")
    ax.axis("off")
    title = f"cover slice, depth {slice.depth}, {len(slice)} nodes"
    if dist is not None:
        title += f", total mass {dist.group.format(dist.sigma)}"
    ax.set_title(title, fontsize=10)
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_matrix(matrix: list[list[int]], g: Graph, path: str | Path, title: str = "") -> Path:
    """Heat map of an |E| x |E| integer matrix with edge names on both axes."""
    names = g.all_edge_names
    fig, ax = plt.subplots(figsize=(1 + 0.3 * len(names), 1 + 0.3 * len(names)))
    if matrix:
        ax.imshow(matrix, cmap="RdBu_r", vmin=-1, vmax=1, interpolation="nearest")
    ax.set_xticks(range(len(names)), names, rotation=90, fontsize=6)
    ax.set_yticks(range(len(names)), names, fontsize=6)
    ax.set_title(title, fontsize=9)
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_counts(rows: list[tuple[str, int, int]], path: str | Path) -> Path:
    """Paired bars of cycle counts and mass-zero distribution counts per group."""
    fig, ax = plt.subplots(figsize=(5, 3))
    xs = range(len(rows))
    ax.bar([x - 0.2 for x in xs], [r[1] for r in rows], width=0.4, label="cycles")
    ax.bar([x + 0.2 for x in xs], [r[2] for r in rows], width=0.4, label="mass-zero distributions")
    ax.set_xticks(list(xs), [r[0] for r in rows])
    ax.set_yscale("log")
    ax.legend(fontsize=7, frameon=False)
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
