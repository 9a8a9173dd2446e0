"""Text and image writers for fields and time series, plus a directory sink."""
from __future__ import annotations

import io
import logging
from pathlib import Path
from typing import Iterable

import numpy as np

from .fields import ScalarField, check_same_grid
from .grid import Grid

log = logging.getLogger(__name__)

FIELD_HEADER = "i,j,x,y,value"
SERIES_COLUMNS = ("day", "phi", "mass_P_mid", "mass_E", "mass_W", "mean_i", "mass_omega")


class OutputError(OSError):
    pass


def fmt(v: float) -> str:
    # 17 significant digits round-trips any float64
    return format(float(v), ".17g")


def write_field_csv(grid: Grid, field: ScalarField) -> str:
    check_same_grid(ScalarField(grid, np.zeros(grid.n_cells)), field)
    buf = io.StringIO()
    buf.write(FIELD_HEADER + "\n")
    for (i, j), (x, y), v in zip(grid.ij, grid.centers, field.values):
        buf.write(f"{i},{j},{fmt(x)},{fmt(y)},{fmt(v)}\n")
    return buf.getvalue()


def read_field_csv(grid: Grid, text: str) -> ScalarField:
    lines = text.strip().splitlines()
    if not lines or lines[0] != FIELD_HEADER:
        raise ValueError("not a field CSV: bad header")
    values = np.full(grid.n_cells, np.nan)
    for line in lines[1:]:
        i, j, _, _, v = line.split(",")
        k = grid.index[int(j), int(i)]
        if k < 0:
            raise ValueError(f"cell ({i}, {j}) is not interior")
        values[k] = float(v)
    if np.isnan(values).any():
        raise ValueError("field CSV does not cover every interior cell")
    return ScalarField(grid, values)


def write_heatmap_pgm(grid: Grid, field: ScalarField) -> bytes:
    """Binary greyscale image; masked cells 0, interior scaled to [1, 255].

    The first image row is the top of the disk (largest y).
    """
    v = field.values
    lo, hi = float(v.min()), float(v.max())
    if hi > lo:
        levels = 1 + np.rint((v - lo) / (hi - lo) * 254.0)
    else:
        levels = np.full_like(v, 255.0)
    img = np.zeros((grid.nx, grid.nx), dtype=np.uint8)
    img[grid.ij[:, 1], grid.ij[:, 0]] = levels.astype(np.uint8)
    header = f"P5\n{grid.nx} {grid.nx}\n255\n".encode("ascii")
    return header + img[::-1].tobytes()


def series_csv(rows: Iterable) -> str:
    out = [",".join(SERIES_COLUMNS)]
    for r in rows:
        out.append(",".join([str(r.day)] + [fmt(getattr(r, c)) for c in SERIES_COLUMNS[1:]]))
    return "\n".join(out) + "\n"


class DirectorySink:
    """Writes ``series.csv``, ``fields/`` CSVs and optional frames and figures."""

    def __init__(self, out_dir: str | Path, heatmaps: bool = False, figures: bool = False):
        self.root = Path(out_dir)
        self.heatmaps = heatmaps
        self.figures = figures
        self.rows: list = []
        try:
            (self.root / "fields").mkdir(parents=True, exist_ok=True)
            if heatmaps:
                (self.root / "frames").mkdir(exist_ok=True)
            if figures:
                (self.root / "figures").mkdir(exist_ok=True)
        except OSError as exc:
            raise OutputError(f"cannot create output directory {self.root}: {exc}") from exc

    def _write(self, path: Path, data: str | bytes) -> None:
        try:
            if isinstance(data, bytes):
                path.write_bytes(data)
            else:
                path.write_text(data, encoding="utf-8")
        except OSError as exc:
            raise OutputError(f"failed to write {path}: {exc}") from exc

    def snapshot(self, day: int, name: str, grid: Grid, field: ScalarField) -> None:
        stem = f"{name}_{day:05d}"
        self._write(self.root / "fields" / f"{stem}.csv", write_field_csv(grid, field))
        if self.heatmaps:
            self._write(self.root / "frames" / f"{stem}.pgm", write_heatmap_pgm(grid, field))
        if self.figures:
            from .plotting import render_field_figure

            path = self.root / "figures" / f"{stem}.png"
            try:
                render_field_figure(grid, field, f"{name}, day {day}", path)
            except OSError as exc:
                raise OutputError(f"failed to write {path}: {exc}") from exc

    def row(self, row) -> None:
        self.rows.append(row)

    def close(self) -> None:
        self._write(self.root / "series.csv", series_csv(self.rows))
        if self.figures and self.rows:
            from .plotting import render_series_figure

            path = self.root / "figures" / "series.png"
            try:
                render_series_figure(self.rows, path)
            except OSError as exc:
                raise OutputError(f"failed to write {path}: {exc}") from exc
        log.info("wrote %d series rows to %s", len(self.rows), self.root)
