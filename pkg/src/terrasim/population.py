"""Daily commuting: pulse schedule, attractors and the relaxation ODE."""
from __future__ import annotations

import math
from dataclasses import dataclass


from .fields import ScalarField, check_same_grid, integrate
from .grid import Grid

BETA_SUM_TOL = 1e-12


@dataclass(frozen=True)
class Schedule:
    """Rectangular, period-1 morning and evening pulses."""

    morning: tuple[float, float] = (0.0, 0.2)
    evening: tuple[float, float] = (0.5, 0.7)
    lambda_m: float = 25.0
    lambda_e: float = 25.0

    def __post_init__(self):
        for name, (a, b) in (("morning", self.morning), ("evening", self.evening)):
            if not 0.0 <= a <= b <= 1.0:
                raise ValueError(f"{name} window must satisfy 0 <= start <= end <= 1, got [{a}, {b})")
        (ma, mb), (ea, eb) = self.morning, self.evening
        if ma < eb and ea < mb:
            raise ValueError("morning and evening windows must be disjoint")
        if not (self.lambda_m > 0 and self.lambda_e > 0):
            raise ValueError("lambda_m and lambda_e must be > 0")


@dataclass(frozen=True)
class Params:
    alpha: float = 5.0
    beta0: float = 0.01
    beta1: float = 0.3
    beta2: float = 0.4
    beta3: float = 0.3
    nu: float = 0.1
    kappa: float = 0.05
    flux_w: float = 0.01

    def __post_init__(self):
        if not self.alpha > 1:
            raise ValueError("alpha must be > 1")
        if not 0 <= self.beta0 < 1:
            raise ValueError("beta0 must lie in [0, 1)")
        if not (self.beta1 > 0 and self.beta2 > 0 and self.beta3 > 0):
            raise ValueError("beta1, beta2, beta3 must be > 0")
        if abs(self.beta1 + self.beta2 + self.beta3 - 1.0) > BETA_SUM_TOL:
            raise ValueError("beta1+beta2+beta3 must equal 1")
        if not self.nu > 0:
            raise ValueError("nu must be > 0")
        if self.kappa < 0:
            raise ValueError("kappa must be >= 0")
        if self.flux_w < 0:
            raise ValueError("flux_w must be >= 0")


@dataclass
class DaySamples:
    start: ScalarField
    midday: ScalarField
    end: ScalarField


def pulse(schedule: Schedule, t: float) -> tuple[float, float]:
    """Return ``(t_m, t_e)`` at time ``t``."""
    s = t - math.floor(t)
    tm = schedule.lambda_m if schedule.morning[0] <= s < schedule.morning[1] else 0.0
    te = schedule.lambda_e if schedule.evening[0] <= s < schedule.evening[1] else 0.0
    return tm, te


def employment_attractor(
    P0: ScalarField, E: ScalarField, alpha: float, grid: Grid
) -> ScalarField:
    check_same_grid(P0, E)
    m_p = integrate(grid, P0)
    m_e = integrate(grid, E)
    denom = m_p + alpha * m_e
    if denom == 0:
        raise ZeroDivisionError("employment attractor undefined: P0 and E both vanish")
    return ScalarField(grid, (m_p / denom) * (P0.values + alpha * E.values))


def home_attractor(P0: ScalarField) -> ScalarField:
    return P0


def commute_substep(
    P: ScalarField,
    A_E: ScalarField,
    A_P: ScalarField,
    tm: float,
    te: float,
    dt: float,
) -> ScalarField:
    """One explicit Euler step of the commute ODE.

    Written as ``T + (1 - w) * (P - T)`` with ``w = dt*(tm+te)`` and ``T``
    the rate-weighted attractor, which is algebraically the Euler update.
    Under ``w <= 1`` it is a convex combination, so ``P`` stays
    non-negative; ``w = 1`` lands on ``T`` and ``P = T`` stays put exactly.
    """
    check_same_grid(P, A_E, A_P)
    w = dt * (tm + te)
    if w > 1.0:
        raise ValueError(f"convexity guard violated: dt*(tm+te) = {w:g} > 1")
    if tm == 0.0 and te == 0.0:
        return P
    if te == 0.0:
        target = A_E.values
    elif tm == 0.0:
        target = A_P.values
    else:
        target = (tm * A_E.values + te * A_P.values) / (tm + te)
    return ScalarField(P.grid, target + (1.0 - w) * (P.values - target))


def run_population_day(
    P_start: ScalarField,
    E_frozen: ScalarField,
    P0: ScalarField,
    schedule: Schedule,
    params: Params,
    substeps: int,
) -> DaySamples:
    if substeps < 2 or substeps % 2:
        raise ValueError(f"substeps must be even and >= 2, got {substeps}")
    grid = P_start.grid
    A_E = employment_attractor(P0, E_frozen, params.alpha, grid)
    A_P = home_attractor(P0)
    dt = 1.0 / substeps
    P = P_start
    midday = None
    for s in range(substeps):
        if s == substeps // 2:
            midday = P
        tm, te = pulse(schedule, s / substeps)
        P = commute_substep(P, A_E, A_P, tm, te, dt)
    return DaySamples(start=P_start, midday=midday, end=P)
