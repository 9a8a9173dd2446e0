"""Coupled territory model: commuting population, jobs, efficiency and wealth on a disk."""
from .economy import (
    DayDiagnostics,
    energy_consumption,
    evolve_efficiency,
    grow_jobs,
    split_population_change,
    wealth_rate,
)
from .engine import SimState, TimeSeriesRow, run_simulation
from .fields import (
    ScalarField,
    constant_field,
    distance_weighted_double_integral,
    gaussian_mixture,
    integrate,
)
from .grid import Grid, build_disk_grid, enforce_stability
from .output import write_field_csv, write_heatmap_pgm
from .population import (
    Params,
    Schedule,
    commute_substep,
    employment_attractor,
    home_attractor,
    pulse,
    run_population_day,
)
from .scenario import Scenario, ScenarioError, load_scenario
from .wealth import WealthState, diffusion_substep, wealth_budget

__version__ = "0.1.0"
