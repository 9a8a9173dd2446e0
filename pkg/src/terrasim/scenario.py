"""Scenario documents: JSON parsing, strict validation and defaults."""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .fields import ScalarField, constant_field, gaussian_mixture
from .grid import Grid, build_disk_grid, enforce_stability, min_wealth_substeps
from .population import Params, Schedule

DEFAULTS: dict[str, Any] = {
    "grid": {"radius": 1.0, "nx": 64},
    "params": {
        "alpha": 5.0,
        "beta0": 0.01,
        "beta1": 0.3,
        "beta2": 0.4,
        "beta3": 0.3,
        "nu": 0.1,
        "kappa": 0.05,
        "flux_w": 0.01,
    },
    "schedule": {
        "morning": [0.0, 0.2],
        "evening": [0.5, 0.7],
        "lambda_m": 25.0,
        "lambda_e": 25.0,
    },
    "initial": {
        "P0": [
            {"center": [-0.45, 0.3], "amplitude": 1.0, "width": 0.25},
            {"center": [0.4, 0.35], "amplitude": 1.0, "width": 0.25},
            {"center": [0.0, -0.5], "amplitude": 1.0, "width": 0.25},
        ],
        "E0": [
            {"center": [0.05, 0.05], "amplitude": 1.2, "width": 0.18},
            {"center": [-0.3, -0.2], "amplitude": 0.3, "width": 0.3},
        ],
        "i0": 0.6,
        "W0": 1.0,
    },
    # wealth_substeps=None picks the smallest multiple of substeps_per_day
    # that satisfies the explicit diffusion bound
    "run": {"days": 50, "substeps_per_day": 200, "wealth_substeps": None},
    "output": {"snapshot_every": 1, "heatmaps": False, "figures": False},
}

BUMP_KEYS = {"center", "amplitude", "width"}


class ScenarioError(ValueError):
    pass


Bump = tuple[tuple[float, float], float, float]


@dataclass
class Scenario:
    radius: float = 1.0
    nx: int = 64
    params: Params = field(default_factory=Params)
    schedule: Schedule = field(default_factory=Schedule)
    P0: list[Bump] = field(default_factory=list)
    E0: list[Bump] = field(default_factory=list)
    i0: float | list[Bump] = 0.6
    W0: float = 1.0
    days: int = 50
    substeps_per_day: int = 200
    wealth_substeps: int | None = None
    snapshot_every: int = 1
    heatmaps: bool = False
    figures: bool = False

    def build_grid(self) -> Grid:
        return build_disk_grid(self.radius, self.nx)

    def resolved_wealth_substeps(self, grid: Grid) -> int:
        if self.wealth_substeps is not None:
            return self.wealth_substeps
        return min_wealth_substeps(self.params.nu, grid, self.substeps_per_day)

    def stability(self, grid: Grid | None = None):
        grid = grid or self.build_grid()
        return enforce_stability(
            self.params,
            self.schedule,
            grid,
            self.substeps_per_day,
            self.resolved_wealth_substeps(grid),
        )

    def initial_fields(self, grid: Grid) -> dict[str, ScalarField]:
        if isinstance(self.i0, list):
            i0 = gaussian_mixture(grid, self.i0)
        else:
            i0 = constant_field(grid, self.i0)
        if i0.min() < 0 or i0.max() > 1:
            raise ScenarioError("initial efficiency i0 must lie in [0, 1]")
        return {
            "P": gaussian_mixture(grid, self.P0),
            "E": gaussian_mixture(grid, self.E0),
            "i": i0,
            "W": constant_field(grid, self.W0),
        }

    def to_dict(self) -> dict[str, Any]:
        def bumps(bs):
            return [{"center": list(c), "amplitude": a, "width": w} for c, a, w in bs]

        p, s = self.params, self.schedule
        return {
            "grid": {"radius": self.radius, "nx": self.nx},
            "params": {k: getattr(p, k) for k in DEFAULTS["params"]},
            "schedule": {
                "morning": list(s.morning),
                "evening": list(s.evening),
                "lambda_m": s.lambda_m,
                "lambda_e": s.lambda_e,
            },
            "initial": {
                "P0": bumps(self.P0),
                "E0": bumps(self.E0),
                "i0": bumps(self.i0) if isinstance(self.i0, list) else self.i0,
                "W0": self.W0,
            },
            "run": {
                "days": self.days,
                "substeps_per_day": self.substeps_per_day,
                "wealth_substeps": self.wealth_substeps,
            },
            "output": {
                "snapshot_every": self.snapshot_every,
                "heatmaps": self.heatmaps,
                "figures": self.figures,
            },
        }


def default_document() -> dict[str, Any]:
    return copy.deepcopy(DEFAULTS)


def _merge(defaults: dict, given: Any, where: str) -> dict:
    if not isinstance(given, dict):
        raise ScenarioError(f"'{where}' must be an object")
    unknown = sorted(set(given) - set(defaults))
    if unknown:
        raise ScenarioError(f"unknown key '{unknown[0]}' in '{where}'")
    out = dict(defaults)
    out.update(given)
    return out


def _number(value: Any, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{name} must be a number")
    return float(value)


def _integer(value: Any, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(f"{name} must be an integer")
    return value


def _window(value: Any, name: str) -> tuple[float, float]:
    if not isinstance(value, list) or len(value) != 2:
        raise ScenarioError(f"{name} must be a [start, end] pair")
    return (_number(value[0], name), _number(value[1], name))


def _bumps(value: Any, name: str) -> list[Bump]:
    if not isinstance(value, list):
        raise ScenarioError(f"{name} must be a list of bumps")
    out = []
    for k, b in enumerate(value):
        where = f"{name}[{k}]"
        if not isinstance(b, dict):
            raise ScenarioError(f"{where} must be an object")
        unknown = sorted(set(b) - BUMP_KEYS)
        if unknown:
            raise ScenarioError(f"unknown key '{unknown[0]}' in '{where}'")
        missing = sorted(BUMP_KEYS - set(b))
        if missing:
            raise ScenarioError(f"missing key '{missing[0]}' in '{where}'")
        center = _window(b["center"], f"{where}.center")
        amplitude = _number(b["amplitude"], f"{where}.amplitude")
        width = _number(b["width"], f"{where}.width")
        if amplitude < 0:
            raise ScenarioError(f"{where}.amplitude must be >= 0")
        if width <= 0:
            raise ScenarioError(f"{where}.width must be > 0")
        out.append((center, amplitude, width))
    return out


def scenario_from_dict(doc: Any) -> Scenario:
    doc = _merge(DEFAULTS, doc, "scenario")
    sections = {k: _merge(DEFAULTS[k], doc[k], k) for k in DEFAULTS}
    g, p, s = sections["grid"], sections["params"], sections["schedule"]
    init, run, out = sections["initial"], sections["run"], sections["output"]

    nx = _integer(g["nx"], "nx")
    if nx < 4:
        raise ScenarioError("nx must be ≥ 4")
    radius = _number(g["radius"], "radius")
    if radius <= 0:
        raise ScenarioError("radius must be > 0")

    try:
        params = Params(**{k: _number(v, k) for k, v in p.items()})
        schedule = Schedule(
            morning=_window(s["morning"], "morning"),
            evening=_window(s["evening"], "evening"),
            lambda_m=_number(s["lambda_m"], "lambda_m"),
            lambda_e=_number(s["lambda_e"], "lambda_e"),
        )
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None

    i0 = init["i0"]
    if isinstance(i0, list):
        i0 = _bumps(i0, "i0")
    else:
        i0 = _number(i0, "i0")
        if not 0 <= i0 <= 1:
            raise ScenarioError("i0 must lie in [0, 1]")

    days = _integer(run["days"], "days")
    if days < 1:
        raise ScenarioError("days must be ≥ 1")
    substeps = _integer(run["substeps_per_day"], "substeps_per_day")
    if substeps < 2 or substeps % 2:
        raise ScenarioError("substeps_per_day must be even and ≥ 2")
    wealth_substeps = run["wealth_substeps"]
    if wealth_substeps is not None:
        wealth_substeps = _integer(wealth_substeps, "wealth_substeps")
        if wealth_substeps < 1:
            raise ScenarioError("wealth_substeps must be ≥ 1")

    snapshot_every = _integer(out["snapshot_every"], "snapshot_every")
    if snapshot_every < 0:
        raise ScenarioError("snapshot_every must be ≥ 0")
    for flag in ("heatmaps", "figures"):
        if not isinstance(out[flag], bool):
            raise ScenarioError(f"{flag} must be true or false")

    return Scenario(
        radius=radius,
        nx=nx,
        params=params,
        schedule=schedule,
        P0=_bumps(init["P0"], "P0"),
        E0=_bumps(init["E0"], "E0"),
        i0=i0,
        W0=_number(init["W0"], "W0"),
        days=days,
        substeps_per_day=substeps,
        wealth_substeps=wealth_substeps,
        snapshot_every=snapshot_every,
        heatmaps=out["heatmaps"],
        figures=out["figures"],
    )


def load_scenario(text: str) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(
            f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    return scenario_from_dict(doc)


def load_scenario_file(path: str | Path) -> Scenario:
    return load_scenario(Path(path).read_text(encoding="utf-8"))
