"""Day loop: commute pass, midday diagnostics, slow updates, wealth pass."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .economy import (
    DayDiagnostics,
    energy_consumption,
    evolve_efficiency,
    grow_jobs,
    split_population_change,
    wealth_rate,
)
from .fields import ScalarField, integrate
from .grid import Grid
from .population import run_population_day
from .scenario import Scenario
from .wealth import WealthState, run_wealth_day

log = logging.getLogger(__name__)

BUDGET_TOL = 1e-10
SNAPSHOT_NAMES = ("P_mid", "E", "Ei", "W")


class StabilityFailure(RuntimeError):
    def __init__(self, report):
        super().__init__(str(report))
        self.report = report


@dataclass
class TimeSeriesRow:
    """One day; ``mass_E`` and ``mean_i`` are the midday values behind ``omega``,
    ``mass_W`` is taken at the end of the day."""

    day: int
    phi: float
    mass_P_mid: float
    mass_E: float
    mass_W: float
    mean_i: float
    mass_omega: float


@dataclass
class SimState:
    grid: Grid
    day: int
    P: ScalarField
    E: ScalarField
    i: ScalarField
    W: ScalarField
    P0: ScalarField
    series: list[TimeSeriesRow] = field(default_factory=list)
    budget_residuals: list[float] = field(default_factory=list)
    midday: list[ScalarField] = field(default_factory=list)
    first_negative_w_day: int | None = None


def initial_state(scenario: Scenario, grid: Grid | None = None) -> SimState:
    grid = grid or scenario.build_grid()
    f = scenario.initial_fields(grid)
    return SimState(grid=grid, day=0, P=f["P"], E=f["E"], i=f["i"], W=f["W"], P0=f["P"])


def step_day(
    state: SimState, scenario: Scenario, wealth_substeps: int
) -> tuple[DayDiagnostics, dict[str, ScalarField]]:
    """Advance ``state`` by one day in place."""
    grid, params, n = state.grid, scenario.params, state.day
    samples = run_population_day(
        state.P, state.E, state.P0, scenario.schedule, params, scenario.substeps_per_day
    )
    P_mid = samples.midday
    # E and i are frozen within the day, so their midday values are the current ones
    E_mid, i_mid = state.E, state.i
    incr, decr = split_population_change(P_mid, samples.start)
    phi = energy_consumption(grid, incr, decr)
    omega = wealth_rate(P_mid, E_mid, i_mid, params.beta0)

    ws = WealthState.start(state.W)
    residual = run_wealth_day(ws, omega, phi, params, grid, wealth_substeps)
    mass_w = integrate(grid, ws.W)
    if abs(residual) > BUDGET_TOL * max(1.0, abs(mass_w)):
        log.warning("day %d: wealth budget residual %.3e above tolerance", n, residual)
    if state.first_negative_w_day is None and ws.W.min() < 0:
        state.first_negative_w_day = n
        log.warning("day %d: wealth density negative (min %.6g), read as a deficit", n, ws.W.min())

    row = TimeSeriesRow(
        day=n,
        phi=phi,
        mass_P_mid=integrate(grid, P_mid),
        mass_E=integrate(grid, E_mid),
        mass_W=mass_w,
        mean_i=float(np.mean(i_mid.values)),
        mass_omega=integrate(grid, omega),
    )
    snapshot = {"P_mid": P_mid, "E": E_mid, "Ei": E_mid * i_mid, "W": ws.W}

    state.P = samples.end
    state.E = grow_jobs(E_mid, omega, params.beta1)
    state.i = evolve_efficiency(i_mid, omega, params.beta1, params.beta2)
    state.W = ws.W
    state.series.append(row)
    state.budget_residuals.append(residual)
    state.midday.append(P_mid)
    state.day = n + 1

    diag = DayDiagnostics(
        day=n,
        phi=phi,
        omega=omega,
        incr=incr,
        decr=decr,
        totals={
            "P": row.mass_P_mid,
            "E": row.mass_E,
            "W": row.mass_W,
            "mean_i": row.mean_i,
        },
    )
    return diag, snapshot


def run_simulation(
    scenario: Scenario, sinks: Sequence = (), grid: Grid | None = None
) -> tuple[SimState, list[TimeSeriesRow]]:
    """Run ``scenario.days`` days; refuses to start when a stability bound fails.

    Each sink receives ``snapshot(day, name, grid, field)`` per cadence,
    ``row(row)`` per day and ``close()`` at the end.
    """
    grid = grid or scenario.build_grid()
    report = scenario.stability(grid)
    if not report.ok:
        raise StabilityFailure(report)
    wealth_substeps = scenario.resolved_wealth_substeps(grid)
    state = initial_state(scenario, grid)
    log.info(
        "running %d days on %d cells (%d commute / %d wealth substeps per day)",
        scenario.days, grid.n_cells, scenario.substeps_per_day, wealth_substeps,
    )
    for n in range(scenario.days):
        _, snap = step_day(state, scenario, wealth_substeps)
        last = n == scenario.days - 1
        due = scenario.snapshot_every > 0 and (n % scenario.snapshot_every == 0 or last)
        for sink in sinks:
            sink.row(state.series[-1])
            if due:
                for name in SNAPSHOT_NAMES:
                    sink.snapshot(n, name, grid, snap[name])
    for sink in sinks:
        sink.close()
    return state, state.series
