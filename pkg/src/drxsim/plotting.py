"""Static SVG bar charts for comparison and sweep outputs."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# fixed salt and no timestamp keep the SVG bytes reproducible
_RC = {"svg.hashsalt": "drxsim", "svg.fonttype": "none"}


def _save(fig: plt.Figure, path: str | Path) -> None:
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None, "Creator": None})
    plt.close(fig)


def bar_chart(labels: Sequence[str], values: Sequence[float], path: str | Path, ylabel: str = "ratio") -> None:
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5, 3.2))
        ax.bar(range(len(values)), values, color="0.45")
        ax.set_xticks(range(len(labels)), labels, rotation=30, ha="right")
        ax.set_ylabel(ylabel)
        ax.axhline(1.0, color="k", lw=0.6, ls="--")
        _save(fig, path)


def grouped_bar_chart(
    x_labels: Sequence[str],
    groups: Mapping[str, Sequence[float]],
    path: str | Path,
    ylabel: str = "mean current [mA]",
    xlabel: str = "",
) -> None:
    """One bar group per x label, one coloured bar per key of ``groups``."""
    n = max(len(groups), 1)
    width = 0.8 / n
    x = np.arange(len(x_labels))
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(6, 3.5))
        for i, (name, vals) in enumerate(groups.items()):
            ax.bar(x + (i - (n - 1) / 2) * width, vals, width, label=name)
        ax.set_xticks(x, x_labels)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.legend(frameon=False)
        _save(fig, path)
