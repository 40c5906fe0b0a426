"""Static figures of Z against derivation depth, written to image files."""
from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .model.simulation import ZRow  # noqa: E402


def plot_z_series(rows: Sequence[ZRow], path: str | Path, title: str = "") -> Path:
    """Z and the exact share of negligent banks against depth."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6, 3.5))
    depths = [r.depth for r in rows]
    ax.plot(depths, [r.z for r in rows], label="Z", color="tab:blue")
    ax.plot(depths, [r.mean_z for r in rows], label="share negligent", color="tab:orange",
            linestyle="--", linewidth=1)
    ax.set_xlabel("depth")
    ax.set_ylabel("Z")
    ax.set_ylim(-0.05, 1.05)
    ax.legend(loc="best", fontsize=8)
    if title:
        ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_grid(series: Mapping[str, Sequence[Sequence[ZRow]]], path: str | Path,
              ncols: int = 4) -> Path:
    """One panel per named cell, overlaying the Z trajectory of every seed."""
    path = Path(path)
    names = list(series)
    nrows = max(1, -(-len(names) // ncols))
    fig, axes = plt.subplots(nrows, ncols, figsize=(3.2 * ncols, 2.4 * nrows),
                             sharey=True, squeeze=False)
    for ax in axes.flat[len(names):]:
        ax.set_visible(False)
    for ax, name in zip(axes.flat, names):
        for rows in series[name]:
            ax.plot([r.depth for r in rows], [r.z for r in rows], linewidth=0.8, alpha=0.5)
        ax.set_title(name, fontsize=8)
        ax.set_ylim(-0.05, 1.05)
        ax.tick_params(labelsize=7)
    for ax in axes[-1]:
        ax.set_xlabel("depth", fontsize=8)
    for ax in axes[:, 0]:
        ax.set_ylabel("Z", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path
