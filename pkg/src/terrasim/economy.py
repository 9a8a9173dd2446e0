"""Daily diagnostics and slow dynamics of jobs and efficiency."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fields import ScalarField, check_same_grid, distance_weighted_double_integral
from .grid import Grid


@dataclass
class DayDiagnostics:
    day: int
    phi: float
    omega: ScalarField
    incr: ScalarField
    decr: ScalarField
    totals: dict[str, float] = field(default_factory=dict)


def split_population_change(
    P_mid: ScalarField, P_morning: ScalarField
) -> tuple[ScalarField, ScalarField]:
    """Positive and negative parts of ``P_mid - P_morning``."""
    grid = check_same_grid(P_mid, P_morning)
    diff = P_mid.values - P_morning.values
    return ScalarField(grid, np.maximum(diff, 0.0)), ScalarField(grid, np.maximum(-diff, 0.0))


def energy_consumption(grid: Grid, incr: ScalarField, decr: ScalarField) -> float:
    return distance_weighted_double_integral(grid, incr, decr)


def wealth_rate(
    P_mid: ScalarField, E_mid: ScalarField, i_mid: ScalarField, beta0: float
) -> ScalarField:
    grid = check_same_grid(P_mid, E_mid, i_mid)
    return ScalarField(grid, beta0 * P_mid.values * E_mid.values * i_mid.values)


def grow_jobs(E: ScalarField, omega: ScalarField, beta1: float, dt: float = 1.0) -> ScalarField:
    """Job growth over one day; exact because the source is constant per day."""
    grid = check_same_grid(E, omega)
    return ScalarField(grid, E.values + beta1 * omega.values * dt)


def logistic_step(i: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Exact solution of ``di/dt = r i (1-i)`` after unit time.

    Written with ``exp(-|r|)`` so neither branch can overflow; ``i=0`` and
    ``i=1`` map to themselves exactly.
    """
    i = np.asarray(i, dtype=float)
    r = np.asarray(r, dtype=float)
    e = np.exp(-np.abs(r))
    with np.errstate(invalid="ignore", divide="ignore"):
        grow = i / (i + (1.0 - i) * e)
        shrink = i * e / (i * e + (1.0 - i))
    out = np.where(r >= 0, grow, shrink)
    # exp underflow can leave 0/0 exactly at the fixed points
    return np.where(i <= 0.0, 0.0, np.where(i >= 1.0, 1.0, out))


def evolve_efficiency(
    i: ScalarField, omega: ScalarField, beta1: float, beta2: float
) -> ScalarField:
    grid = check_same_grid(i, omega)
    if np.any(i.values < 0) or np.any(i.values > 1):
        raise ValueError("efficiency must lie in [0, 1]")
    r = (beta2 - beta1) * omega.values
    return ScalarField(grid, logistic_step(i.values, r))
