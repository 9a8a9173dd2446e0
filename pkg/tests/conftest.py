import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from terrasim.engine import run_simulation  # noqa: E402
from terrasim.grid import build_disk_grid  # noqa: E402
from terrasim.output import DirectorySink  # noqa: E402
from terrasim.scenario import load_scenario  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


class MemorySink:
    """Keeps every snapshot in memory, keyed by ``(name, day)``."""

    def __init__(self):
        self.snapshots = {}
        self.rows = []

    def snapshot(self, day, name, grid, field):
        self.snapshots[name, day] = field

    def row(self, row):
        self.rows.append(row)

    def close(self):
        pass


@pytest.fixture(scope="session")
def default_run(tmp_path_factory):
    """The default scenario, run once with both an in-memory and a directory sink."""
    scenario = load_scenario("{}")
    out = tmp_path_factory.mktemp("default_run")
    memory = MemorySink()
    t0 = time.perf_counter()
    state, series = run_simulation(scenario, [memory, DirectorySink(out)])
    elapsed = time.perf_counter() - t0
    return {
        "scenario": scenario,
        "state": state,
        "series": series,
        "elapsed": elapsed,
        "memory": memory,
        "out": out,
    }


@pytest.fixture(scope="session")
def grid4():
    return build_disk_grid(1.0, 4)


@pytest.fixture(scope="session")
def grid16():
    return build_disk_grid(1.0, 16)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
