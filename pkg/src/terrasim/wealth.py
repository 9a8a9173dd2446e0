"""Explicit conservative diffusion of wealth with sources and boundary inflow."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fields import ScalarField, check_same_grid, integrate
from .grid import DIFFUSION_LIMIT, Grid
from .population import Params


class StabilityError(ValueError):
    pass


@dataclass
class WealthState:
    W: ScalarField
    injected: float = 0.0
    inflow: float = 0.0
    initial_mass: float = 0.0

    @classmethod
    def start(cls, W: ScalarField) -> WealthState:
        return cls(W=W, initial_mass=integrate(W.grid, W))

    def residual(self) -> float:
        return wealth_budget(
            self.W.grid,
            None,
            self.W,
            self.injected,
            self.inflow,
            mass_before=self.initial_mass,
        )


@lru_cache(maxsize=16)
def _gather_index(grid: Grid) -> np.ndarray:
    """Neighbour index per slot, pointing at the cell itself where the face is a boundary."""
    own = np.arange(grid.n_cells)
    return np.where(grid.neighbors >= 0, grid.neighbors, own[:, None]).T.copy()


def laplacian(grid: Grid, values: np.ndarray) -> np.ndarray:
    """5-point Laplacian in flux form; boundary faces carry no gradient term.

    Differences are summed as ``(+x, -x) + (+y, -y)`` pairs, so a constant
    field gives exactly zero and the result is exactly invariant under the
    lattice reflections.
    """
    xp, xm, yp, ym = _gather_index(grid)
    dx = (values[xp] - values) + (values[xm] - values)
    dy = (values[yp] - values) + (values[ym] - values)
    return (dx + dy) / grid.h**2


def boundary_source(grid: Grid, nu: float, flux: float) -> np.ndarray:
    """Per-cell rate from boundary inflow: ``nu*flux/h`` per exposed face."""
    counts = np.bincount(grid.face_cells, minlength=grid.n_cells)
    return counts * (nu * flux / grid.h)


def wealth_source(grid: Grid, omega: ScalarField, phi: float, params: Params) -> np.ndarray:
    """Constant-in-day rate: boundary inflow + production - uniform consumption."""
    return (
        boundary_source(grid, params.nu, params.flux_w)
        + params.beta3 * omega.values
        - params.kappa * phi
    )


def _check_stable(grid: Grid, nu: float, dt: float) -> None:
    ratio = nu * dt / grid.h**2
    if ratio > DIFFUSION_LIMIT:
        raise StabilityError(f"nu*dt/h^2 = {ratio:.6g} exceeds {DIFFUSION_LIMIT}")


def _step(grid: Grid, w: np.ndarray, source: np.ndarray, nu: float, dt: float) -> np.ndarray:
    return w + dt * (nu * laplacian(grid, w) + source)


def diffusion_substep(
    W: ScalarField,
    omega: ScalarField,
    phi: float,
    params: Params,
    grid: Grid,
    dt: float,
) -> ScalarField:
    check_same_grid(W, omega)
    _check_stable(grid, params.nu, dt)
    source = wealth_source(grid, omega, phi, params)
    return ScalarField(grid, _step(grid, W.values, source, params.nu, dt))


def substep_injection(grid: Grid, omega: ScalarField, phi: float, params: Params, dt: float) -> float:
    """Net volume source added by one substep, excluding boundary inflow."""
    return dt * (
        params.beta3 * integrate(grid, omega) - params.kappa * phi * grid.total_area()
    )


def substep_inflow(grid: Grid, params: Params, dt: float) -> float:
    return dt * params.nu * params.flux_w * grid.boundary_length


def wealth_budget(
    grid: Grid,
    W_before: ScalarField | None,
    W_after: ScalarField,
    injected: float,
    inflow: float,
    mass_before: float | None = None,
) -> float:
    """Mass change not explained by the ledger; should be rounding-level."""
    if mass_before is None:
        mass_before = integrate(grid, W_before)
    return integrate(grid, W_after) - mass_before - injected - inflow


def run_wealth_day(
    state: WealthState,
    omega: ScalarField,
    phi: float,
    params: Params,
    grid: Grid,
    substeps: int,
) -> float:
    """Advance ``state`` by one day in place; returns the day's budget residual."""
    dt = 1.0 / substeps
    mass_before = integrate(grid, state.W)
    injected = substep_injection(grid, omega, phi, params, dt)
    inflow = substep_inflow(grid, params, dt)
    check_same_grid(state.W, omega)
    _check_stable(grid, params.nu, dt)
    source = wealth_source(grid, omega, phi, params)
    w = state.W.values
    for _ in range(substeps):
        w = _step(grid, w, source, params.nu, dt)
    state.W = W = ScalarField(grid, w)
    state.injected += substeps * injected
    state.inflow += substeps * inflow
    return wealth_budget(grid, None, W, substeps * injected, substeps * inflow, mass_before=mass_before)
