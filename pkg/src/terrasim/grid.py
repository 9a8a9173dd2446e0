"""Masked Cartesian discretisation of a disk.

Cells are the squares of a uniform ``nx x nx`` lattice covering
``[-radius, radius]^2`` whose centres lie strictly inside the disk.  Faces
between an interior cell and a masked (or out-of-lattice) neighbour form a
staircase approximation of the boundary, each carrying an axis-aligned
outward normal.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .population import Params, Schedule

# neighbour slots: +x, -x, +y, -y
NEIGHBOR_OFFSETS = ((1, 0), (-1, 0), (0, 1), (0, -1))
NORMALS = np.array(NEIGHBOR_OFFSETS, dtype=float)

DIFFUSION_LIMIT = 0.25


@dataclass(frozen=True, eq=False)
class Grid:
    radius: float
    nx: int
    h: float
    ij: np.ndarray          # (N, 2) lattice indices (i along x, j along y)
    centers: np.ndarray     # (N, 2)
    neighbors: np.ndarray   # (N, 4) cell index per slot, -1 if not interior
    index: np.ndarray       # (nx, nx) indexed [j, i]; -1 where masked
    face_cells: np.ndarray  # (F,) cell owning each boundary face
    face_normals: np.ndarray  # (F, 2) outward unit normals

    @property
    def n_cells(self) -> int:
        return len(self.centers)

    @property
    def cell_area(self) -> float:
        return self.h * self.h

    @property
    def areas(self) -> np.ndarray:
        return np.full(self.n_cells, self.cell_area)

    @property
    def n_faces(self) -> int:
        return len(self.face_cells)

    @property
    def boundary_length(self) -> float:
        """Length of the staircase boundary (not ``2*pi*radius``)."""
        return self.n_faces * self.h

    @property
    def degree(self) -> np.ndarray:
        return (self.neighbors >= 0).sum(axis=1)

    @property
    def key(self) -> tuple[float, int]:
        return (self.radius, self.nx)

    def total_area(self) -> float:
        return float(np.sum(self.areas))


def build_disk_grid(radius: float = 1.0, nx: int = 64) -> Grid:
    """Build the masked grid; cells are ordered row-major by ``(j, i)``."""
    if not radius > 0:
        raise ValueError(f"radius must be > 0, got {radius!r}")
    if int(nx) != nx or nx < 4:
        raise ValueError("nx must be ≥ 4")
    nx = int(nx)
    radius = float(radius)
    h = 2.0 * radius / nx
    coords = -radius + (np.arange(nx) + 0.5) * h
    X, Y = np.meshgrid(coords, coords)  # [j, i]
    inside = X * X + Y * Y < radius * radius

    index = np.full((nx, nx), -1, dtype=np.int64)
    jj, ii = np.nonzero(inside)  # row-major: j outer, i inner
    index[jj, ii] = np.arange(len(jj))
    ij = np.column_stack([ii, jj])
    centers = np.column_stack([coords[ii], coords[jj]])

    padded = np.full((nx + 2, nx + 2), -1, dtype=np.int64)
    padded[1:-1, 1:-1] = index
    neighbors = np.empty((len(jj), 4), dtype=np.int64)
    for k, (di, dj) in enumerate(NEIGHBOR_OFFSETS):
        neighbors[:, k] = padded[jj + 1 + dj, ii + 1 + di]

    cells, slots = np.nonzero(neighbors < 0)
    return Grid(
        radius=radius,
        nx=nx,
        h=h,
        ij=ij,
        centers=centers,
        neighbors=neighbors,
        index=index,
        face_cells=cells,
        face_normals=NORMALS[slots],
    )


@dataclass
class StabilityReport:
    diffusion_ratio: float
    commute_weight: float
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        lines = [
            f"diffusion ratio nu*dt/h^2 = {self.diffusion_ratio:.6g} (limit {DIFFUSION_LIMIT})",
            f"commute weight dt*(lambda_m+lambda_e) = {self.commute_weight:.6g} (limit 1)",
        ]
        lines += [f"VIOLATION: {v}" for v in self.violations]
        lines.append("stability: " + ("ok" if self.ok else "FAILED"))
        return "\n".join(lines)


def enforce_stability(
    params: Params,
    schedule: Schedule,
    grid: Grid,
    substeps_per_day: int,
    wealth_substeps: int | None = None,
) -> StabilityReport:
    """Check both explicit-step bounds.

    The diffusion bound uses ``wealth_substeps`` when the wealth pass is
    sub-cycled, otherwise the commute step ``1/substeps_per_day``.
    """
    dt = 1.0 / substeps_per_day
    dt_w = 1.0 / (wealth_substeps or substeps_per_day)
    ratio = params.nu * dt_w / grid.h**2
    weight = dt * (schedule.lambda_m + schedule.lambda_e)
    report = StabilityReport(ratio, weight)
    if ratio > DIFFUSION_LIMIT:
        report.violations.append(
            f"diffusion bound: nu={params.nu:g}, dt={dt_w:g}, h={grid.h:g} gives "
            f"nu*dt/h^2={ratio:.6g} > {DIFFUSION_LIMIT}"
        )
    if weight > 1.0:
        report.violations.append(
            f"commute bound: dt={dt:g}, lambda_m={schedule.lambda_m:g}, "
            f"lambda_e={schedule.lambda_e:g} gives dt*(lambda_m+lambda_e)={weight:.6g} > 1"
        )
    return report


def min_wealth_substeps(nu: float, grid: Grid, base: int) -> int:
    """Smallest multiple of ``base`` meeting the explicit diffusion bound."""
    k = 1
    while nu * (1.0 / (k * base)) / grid.h**2 > DIFFUSION_LIMIT:
        k += 1
    return k * base
