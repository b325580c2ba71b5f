"""Figures for CLI reports, rendered off-screen to image files."""

from __future__ import annotations

import math
import os
import tempfile

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _save(fig, path: str) -> str:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    suffix = os.path.splitext(path)[1] or ".png"
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=suffix)
    os.close(fd)
    # fixed metadata keeps PNG output byte-stable across runs
    fig.savefig(tmp, dpi=100, metadata={"Software": None})
    plt.close(fig)
    os.replace(tmp, path)
    return path


def plot_depth_gap(ms, depths, source_depth: int, path: str) -> str:
    """Composed relation depth per gadget size against d and d(log m + 1)."""
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(ms, depths, "o-", label="composed depth")
    ax.plot(ms, [source_depth * (math.log2(m) + 1) for m in ms], "--",
            label="d (log m + 1)")
    ax.axhline(source_depth, color="gray", linestyle=":", label="d")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("gadget size m")
    ax.set_ylabel("decision-tree depth")
    ax.legend()
    fig.tight_layout()
    return _save(fig, path)


def plot_partition(parts, path: str) -> str:
    """Part sizes in selection order, annotated with |I_j|."""
    fig, ax = plt.subplots(figsize=(5, 3.5))
    sizes = [len(p.members) for p in parts]
    xs = range(1, len(parts) + 1)
    ax.bar(xs, sizes)
    for x, p, s in zip(xs, parts, sizes):
        ax.annotate(f"|I|={len(p.coords)}", (x, s), ha="center", va="bottom", fontsize=7)
    ax.set_xlabel("part")
    ax.set_ylabel("selectors in part")
    fig.tight_layout()
    return _save(fig, path)


def plot_simulation(runs, path: str) -> str:
    """log2 |X||Y| along each simulated walk; runs maps a label to steps."""
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for label, steps in runs.items():
        ax.plot(range(1, len(steps) + 1),
                [math.log2(s.x_size * s.y_size) for s in steps], marker=".", label=label)
    ax.set_xlabel("protocol step")
    ax.set_ylabel("log2 |R|")
    if len(runs) <= 8:
        ax.legend(fontsize=7)
    fig.tight_layout()
    return _save(fig, path)
