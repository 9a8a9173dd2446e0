"""Matplotlib figures for snapshots and the daily time series."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .fields import ScalarField  # noqa: E402
from .grid import Grid  # noqa: E402

SERIES_PANELS = (
    ("phi", "energy consumption"),
    ("mass_P_mid", "population mass (midday)"),
    ("mass_E", "job-station mass"),
    ("mass_W", "wealth mass"),
    ("mean_i", "mean efficiency"),
    ("mass_omega", "wealth production"),
)


def render_field_figure(grid: Grid, field: ScalarField, title: str, path: str | Path) -> None:
    img = np.ma.masked_invalid(field.to_image())
    r = grid.radius
    fig, ax = plt.subplots(figsize=(4.6, 4))
    im = ax.imshow(img, origin="lower", extent=(-r, r, -r, r), cmap="viridis")
    ax.add_patch(plt.Circle((0, 0), r, fill=False, lw=0.8, color="k"))
    ax.set_title(title)
    ax.set_aspect("equal")
    fig.colorbar(im, ax=ax, shrink=0.85)
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)


def render_series_figure(rows, path: str | Path) -> None:
    days = [r.day for r in rows]
    fig, axes = plt.subplots(2, 3, figsize=(11, 6), sharex=True)
    for ax, (col, label) in zip(axes.flat, SERIES_PANELS):
        ax.plot(days, [getattr(r, col) for r in rows], lw=1.2)
        ax.set_title(label, fontsize=10)
        ax.grid(alpha=0.3)
    for ax in axes[-1]:
        ax.set_xlabel("day")
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
