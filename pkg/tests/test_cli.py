import json
import subprocess
import sys

import pytest

from terrasim.cli import main
from terrasim.scenario import DEFAULTS

SMALL = {"grid": {"nx": 16}, "run": {"days": 3}}


@pytest.fixture
def scenario_file(tmp_path):
    p = tmp_path / "scenario.json"
    p.write_text(json.dumps(SMALL))
    return p


def test_print_defaults(capsys):
    assert main(["print-defaults"]) == 0
    assert json.loads(capsys.readouterr().out) == json.loads(json.dumps(DEFAULTS))


def test_check_ok(scenario_file, capsys):
    assert main(["check", "--scenario", str(scenario_file)]) == 0
    assert "stability: ok" in capsys.readouterr().out


def test_check_unstable(tmp_path, capsys):
    p = tmp_path / "s.json"
    p.write_text(json.dumps({"params": {"nu": 1.0}, "run": {"wealth_substeps": 200}}))
    assert main(["check", "--scenario", str(p)]) == 2
    assert "VIOLATION: diffusion bound" in capsys.readouterr().out


def test_invalid_scenario(tmp_path, capsys):
    p = tmp_path / "s.json"
    p.write_text('{"grid": {"nx": 3}}')
    with pytest.raises(SystemExit) as exc:
        main(["check", "--scenario", str(p)])
    assert exc.value.code == 2
    assert "nx must be ≥ 4" in capsys.readouterr().err


def test_missing_scenario(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["run", "--scenario", str(tmp_path / "nope.json"), "--out", str(tmp_path)])
    assert exc.value.code == 3


def test_run_writes_outputs(scenario_file, tmp_path):
    out = tmp_path / "out"
    rc = main(["run", "--scenario", str(scenario_file), "--out", str(out),
               "--days", "2", "--snapshot-every", "1", "--heatmaps", "--figures"])
    assert rc == 0
    assert len((out / "series.csv").read_text().splitlines()) == 3
    assert (out / "fields" / "W_00001.csv").exists()
    assert (out / "frames" / "P_mid_00000.pgm").read_bytes()[:2] == b"P5"
    assert (out / "figures" / "series.png").exists()


def test_run_unstable_exit_code(tmp_path):
    p = tmp_path / "s.json"
    p.write_text(json.dumps({"grid": {"nx": 16}, "schedule": {"lambda_m": 300}}))
    assert main(["run", "--scenario", str(p), "--out", str(tmp_path / "o")]) == 2


def test_run_io_failure(scenario_file, tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    assert main(["run", "--scenario", str(scenario_file), "--out", str(blocker / "x")]) == 3


def test_module_entry_point(scenario_file):
    proc = subprocess.run(
        [sys.executable, "-m", "terrasim", "check", "--scenario", str(scenario_file)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "stability: ok" in proc.stdout
