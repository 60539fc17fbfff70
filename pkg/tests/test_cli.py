import csv
import json
import subprocess
import sys
from pathlib import Path

import pytest

from acouswarm import swarm
from acouswarm.cli import EXIT_CONVERGENCE, EXIT_INVALID, EXIT_OK, RunRequest, main, run
from acouswarm.plotting import PlotSpec, emit_plot
from acouswarm.reports import format_value, write_csv

SCENARIOS = Path(__file__).parent.parent / "scenarios"
TABLE = SCENARIOS / "table_robot.json"


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


def test_validate_ok(tmp_path, capsys):
    assert run(RunRequest("validate", TABLE, tmp_path / "out")) == EXIT_OK
    assert not (tmp_path / "out").exists()
    assert "ok" in capsys.readouterr().out


def test_validate_violation(tmp_path, capsys):
    code = main(["validate", "--scenario", str(TABLE), "--set", "source.intensity=1500", "--set", "source.pressure=null"])
    assert code == EXIT_INVALID
    err = capsys.readouterr().err
    assert "source.intensity" in err and "1000 W/m^2" in err


def test_bad_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"robot": {"radius": 3}}')
    assert main(["validate", "--scenario", str(bad)]) == EXIT_INVALID
    assert main(["validate", "--scenario", str(tmp_path / "missing.json")]) == EXIT_INVALID


def test_unknown_command():
    with pytest.raises(ValueError):
        RunRequest("dance", TABLE)


def test_convergence_exit(tmp_path, monkeypatch, capsys):
    real = swarm.rk4_step
    monkeypatch.setattr(swarm, "rk4_step", lambda rhs, x, y, h: real(rhs, x, y, h) - 50.0 * h * h)
    code = run(RunRequest("swarm-profile", TABLE, tmp_path, ("swarm.robot_count=1e11",)))
    assert code == EXIT_CONVERGENCE
    assert "convergence" in capsys.readouterr().err


def test_power_profile(tmp_path):
    assert run(RunRequest("power-profile", TABLE, tmp_path, plot=True)) == EXIT_OK
    rows = read_rows(tmp_path / "power_profile.csv")
    assert rows[0] == ["depth_m", "frequency_hz", "pressure_pa", "robot_power_w"]
    assert len(rows) == 1 + 5 * 12
    values = {(float(r[0]), float(r[1])): (float(r[2]), float(r[3])) for r in rows[1:]}
    p, w = values[(0.2, 5e5)]
    assert p == pytest.approx(21.80e3, rel=1e-3)
    assert w == pytest.approx(10 * 21.96e-12, rel=1e-3)
    assert all("e" in cell for cell in rows[1])
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert {o["file"] for o in manifest["outputs"]} == {"power_profile.csv", "power_profile.svg"}
    assert manifest["resolved_parameters"]["robot"]["num_pistons"] == 20
    assert manifest["resolved_parameters"]["numerics"]["steps_per_cycle"] == 400


@pytest.mark.parametrize(
    "command, scenario, files",
    [
        ("cross-sections", "table_robot", {"cross_sections.csv"}),
        ("swarm-profile", "swarm_1e11", {"swarm_profile.csv", "swarm_summary.csv"}),
        ("mitigate", "split_frequency", {"mitigation.csv"}),
        ("mitigate", "sync_duty_cycle", {"mitigation.csv"}),
        ("mitigate", "lung", {"mitigation.csv"}),
        ("mitigate", "power_cap", {"mitigation.csv"}),
    ],
)
def test_commands_deterministic(tmp_path, command, scenario, files):
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert run(RunRequest(command, SCENARIOS / f"{scenario}.json", out)) == EXIT_OK
        outs.append(out)
        manifest = json.loads((out / "manifest.json").read_text())
        listed = {o["file"] for o in manifest["outputs"]}
        assert listed == files
        assert {p.name for p in out.iterdir()} == files | {"manifest.json"}
    for f in files:
        assert (outs[0] / f).read_bytes() == (outs[1] / f).read_bytes()
    assert (outs[0] / "manifest.json").read_bytes() == (outs[1] / "manifest.json").read_bytes()


def test_mitigate_split_reports_crossover(tmp_path):
    assert run(RunRequest("mitigate", SCENARIOS / "split_frequency.json", tmp_path, plot=True)) == EXIT_OK
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert 0.07 <= manifest["results"]["crossover_depth_m"] <= 0.09
    svg = (tmp_path / "mitigation.svg").read_text()
    assert svg.startswith("<?xml")


def test_sweep(tmp_path):
    code = run(RunRequest("sweep", TABLE, tmp_path, ("numerics.frequencies=[\"100 kHz\", \"1 MHz\"]",), plot=True))
    assert code == EXIT_OK
    summary = read_rows(tmp_path / "sweep_summary.csv")
    assert summary[0][:5] == ["parameter_value", "depth_m", "frequency_hz", "pressure_pa", "robot_power_w"]
    for i in range(3):
        assert (tmp_path / f"sweep_{i:03d}.csv").exists()
    deep = {}
    for r in summary[1:]:
        if float(r[1]) == 0.2:
            deep.setdefault(float(r[2]), []).append((float(r[0]), float(r[4])))
    for f, pts in deep.items():
        powers = [w for _, w in sorted(pts)]
        assert powers == sorted(powers, reverse=True)
    serial = tmp_path / "serial"
    run(RunRequest("sweep", TABLE, serial, ("numerics.frequencies=[\"100 kHz\", \"1 MHz\"]",), workers=1))
    assert (serial / "sweep_summary.csv").read_bytes() == (tmp_path / "sweep_summary.csv").read_bytes()


def test_format_value():
    assert format_value(1 / 3) == "3.333333333e-01"
    assert format_value(0) == "0.000000000e+00"
    assert format_value("x") == "x"


def test_plot_errors(tmp_path):
    data = write_csv(tmp_path / "d.csv", ("x", "y"), [(1.0, 2.0), (2.0, 3.0)])
    with pytest.raises(KeyError, match="'z'"):
        emit_plot(data, PlotSpec("x", ("z",)), tmp_path / "d.svg")
    empty = write_csv(tmp_path / "e.csv", ("x", "y"), [])
    with pytest.raises(ValueError, match="no data"):
        emit_plot(empty, PlotSpec("x", ("y",)), tmp_path / "e.svg")
    out = emit_plot(data, PlotSpec("x", ("y",), vline=1.5), tmp_path / "d.svg")
    assert out.read_bytes() == emit_plot(data, PlotSpec("x", ("y",), vline=1.5), tmp_path / "d2.svg").read_bytes()


def test_console_script(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "acouswarm.cli", "validate", "--scenario", str(TABLE)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
