"""Figure rendering for the CLI report path.

Every plotting helper writes a file and never opens a window; the CLI
calls these next to its CSV output when asked for a figure.
"""

from __future__ import annotations

from typing import Mapping, Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def save_line_figure(
    path: str,
    x: Sequence[float],
    series: Mapping[str, Sequence[float]],
    xlabel: str,
    ylabel: str,
    title: Optional[str] = None,
    logx: bool = False,
    logy: bool = False,
    hlines: Sequence[float] = (),
) -> str:
    fig, ax = plt.subplots(figsize=(6.0, 3.8))
    for name, ys in series.items():
        ax.plot(x, ys, marker="o", markersize=3, linewidth=1.2, label=name)
    for level in hlines:
        ax.axhline(level, color="gray", linestyle="--", linewidth=0.8)
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    if len(series) > 1:
        ax.legend(fontsize=8)
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_spectrum_figure(path: str, eigenvalues: Sequence[float], title: Optional[str] = None) -> str:
    fig, ax = plt.subplots(figsize=(6.0, 3.8))
    ax.plot(range(len(eigenvalues)), sorted(eigenvalues), drawstyle="steps-post", linewidth=1.2)
    ax.axhline(0.0, color="gray", linestyle="--", linewidth=0.8)
    ax.axhline(1.0, color="gray", linestyle="--", linewidth=0.8)
    ax.set_xlabel("index")
    ax.set_ylabel("eigenvalue")
    if title:
        ax.set_title(title)
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
