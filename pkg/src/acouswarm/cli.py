"""``acouswarm <command> --scenario FILE [--out DIR] [--plot] [--set key=value ...]``.

Exit status: 0 ok, 2 invalid scenario, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .cross_sections import cross_section_breakdown
from .errors import ConvergenceError, ScenarioError, ValidityError
from .mitigation import DualFrequencyProfile, SyncBurst, run_strategy
from .piston import robot_power
from .plotting import PlotSpec, emit_plot
from .reports import write_csv, write_manifest
from .scenario import (
    NoMitigation,
    Scenario,
    apply_overrides,
    load_scenario_dict,
    scenario_from_dict,
    scenario_to_dict,
    set_dotted,
    validate_scenario,
)
from .swarm import DensityProfile, scenario_profile, swarm_power_summary
from .tissue import path_pressure

COMMANDS = ("power-profile", "cross-sections", "swarm-profile", "mitigate", "sweep", "validate")
EXIT_OK, EXIT_INVALID, EXIT_CONVERGENCE = 0, 2, 3


@dataclass(frozen=True)
class RunRequest:
    command: str
    scenario: Path
    out: Path = Path("out")
    overrides: tuple[str, ...] = ()
    plot: bool = False
    workers: int | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}; expected one of {', '.join(COMMANDS)}")


@dataclass
class Emitted:
    files: list[Path] = field(default_factory=list)
    results: dict = field(default_factory=dict)


def resolve(raw: dict) -> Scenario:
    scenario = scenario_from_dict(raw)
    violations = validate_scenario(scenario)
    if violations:
        raise ScenarioError(f"{len(violations)} scenario violation(s)", violations)
    return scenario


def _depth_grid(scenario: Scenario) -> list[float]:
    length = scenario.path.total_length
    return [d for d in scenario.numerics.depths if 0 <= d <= length * (1 + 1e-12)]


def power_profile(scenario: Scenario, out: Path, plot: bool) -> Emitted:
    """Single robot versus frequency at the configured depths, tissue attenuation only."""
    rows = []
    for d in _depth_grid(scenario):
        for f in scenario.numerics.frequencies:
            p = path_pressure(scenario.source, scenario.path, f, d)
            rows.append((d, f, p, robot_power(scenario.robot, p, f, scenario.fluid)))
    csv_path = write_csv(out / "power_profile.csv", ("depth_m", "frequency_hz", "pressure_pa", "robot_power_w"), rows)
    em = Emitted([csv_path])
    if plot:
        spec = PlotSpec("frequency_hz", ("robot_power_w",), group="depth_m", xlabel="frequency (kHz)",
                        ylabel="robot power (pW)", x_scale=1e-3, y_scale=1e12)
        em.files.append(emit_plot(csv_path, spec, out / "power_profile.svg"))
    return em


def cross_sections(scenario: Scenario, out: Path, plot: bool) -> Emitted:
    depth = scenario.numerics.cross_section_depth
    medium = scenario.path.segments[scenario.path.segment_index(depth)][0]
    rows = []
    for f in scenario.numerics.frequencies:
        p = path_pressure(scenario.source, scenario.path, f, depth)
        live = cross_section_breakdown(scenario.robot, p, f, scenario.fluid, medium)
        held = cross_section_breakdown(scenario.robot, p, f, scenario.fluid, medium, locked=True)
        rows.append((f, p, live.absorption, live.scattering, live.boundary_dissipation, live.total,
                     held.scattering, held.boundary_dissipation, live.geometric))
    header = ("frequency_hz", "pressure_pa", "absorption_m2", "scattering_m2", "dissipation_m2", "total_m2",
              "locked_scattering_m2", "locked_dissipation_m2", "geometric_m2")
    csv_path = write_csv(out / "cross_sections.csv", header, rows)
    em = Emitted([csv_path], {"depth_m": depth})
    if plot:
        spec = PlotSpec("frequency_hz", header[2:5] + header[6:], xlabel="frequency (kHz)",
                        ylabel="cross section (m^2)", x_scale=1e-3)
        em.files.append(emit_plot(csv_path, spec, out / "cross_sections.svg"))
    return em


def _swarm_rows(scenario: Scenario) -> tuple[list, list]:
    """Unmitigated profile rows at every sampled depth, plus per-frequency swarm totals."""
    density = DensityProfile.from_swarm(scenario.swarm)
    rows, summary = [], []
    for f in scenario.numerics.frequencies:
        prof = scenario_profile(scenario, f, NoMitigation())
        rows.extend(zip(prof.depth, [f] * len(prof.depth), prof.pressure, prof.robot_power, prof.alpha_robot))
        mean, total = swarm_power_summary(prof, density, scenario.swarm.robot_count)
        summary.append((f, mean, total))
    return rows, summary


PROFILE_HEADER = ("depth_m", "frequency_hz", "pressure_pa", "robot_power_w", "alpha_robot_per_m")


def _at_depths(rows: list, depths: list[float]) -> list:
    keep = {round(d, 12) for d in depths}
    return [r for r in rows if round(float(r[0]), 12) in keep]


def swarm_profile(scenario: Scenario, out: Path, plot: bool) -> Emitted:
    rows, summary = _swarm_rows(scenario)
    files = [
        write_csv(out / "swarm_profile.csv", PROFILE_HEADER, rows),
        write_csv(out / "swarm_summary.csv", ("frequency_hz", "mean_robot_power_w", "total_swarm_power_w"), summary),
    ]
    em = Emitted(files)
    if plot:
        sel = write_csv(out / "swarm_power_vs_frequency.csv", PROFILE_HEADER, _at_depths(rows, _depth_grid(scenario)))
        em.files.append(sel)
        spec = PlotSpec("frequency_hz", ("robot_power_w",), group="depth_m", xlabel="frequency (kHz)",
                        ylabel="robot power (pW)", x_scale=1e-3, y_scale=1e12)
        em.files.append(emit_plot(sel, spec, out / "swarm_profile.svg"))
    return em


def mitigate(scenario: Scenario, out: Path, plot: bool) -> Emitted:
    f = scenario.source.frequencies[0].frequency
    result = run_strategy(scenario, f)
    em = Emitted()
    if isinstance(result, DualFrequencyProfile):
        header = ("depth_m", "low_pressure_pa", "high_pressure_pa", "low_robot_power_w", "high_robot_power_w",
                  "chosen_frequency_hz", "delivered_power_w")
        rows = zip(result.depth, result.low.pressure, result.high.pressure, result.low.robot_power,
                   result.high.robot_power, result.chosen_frequency, result.delivered_power)
        em.results = {"crossover_depth_m": result.crossover_depth,
                      "frequencies_hz": [result.low.frequency, result.high.frequency]}
        ys, vline = ("delivered_power_w",), result.crossover_depth
    else:
        base = scenario_profile(scenario, f, NoMitigation())
        if isinstance(result, SyncBurst):
            header = ("depth_m", "baseline_power_w", "burst_power_w", "average_power_w")
            rows = zip(result.depth, result.baseline_power, result.burst_power, result.average_power)
            ys = header[1:]
        else:
            header = ("depth_m", "baseline_pressure_pa", "baseline_power_w", "mitigated_pressure_pa",
                      "mitigated_power_w")
            rows = zip(base.depth, base.pressure, base.robot_power, result.pressure, result.robot_power)
            ys = ("baseline_power_w", "mitigated_power_w")
        em.results = {"frequency_hz": f}
        vline = None
    csv_path = write_csv(out / "mitigation.csv", header, list(rows))
    em.files.append(csv_path)
    if plot:
        spec = PlotSpec("depth_m", ys, logx=False, xlabel="depth (cm)", ylabel="robot power (pW)",
                        x_scale=100, y_scale=1e12, vline=vline)
        em.files.append(emit_plot(csv_path, spec, out / "mitigation.svg"))
    return em


def _sweep_point(raw: dict) -> tuple[list, list]:
    return _swarm_rows(resolve(raw))


def sweep(scenario: Scenario, out: Path, plot: bool, workers: int | None = None) -> Emitted:
    """Swarm profile for each value of the sweep parameter, evaluated in parallel."""
    key, values = scenario.numerics.sweep_parameter, list(scenario.numerics.sweep_values)
    base = scenario_to_dict(scenario)
    points = []
    for v in values:
        raw = apply_overrides(base, [])
        set_dotted(raw, key, v)
        resolve(raw)  # fail fast, in this process, on an invalid point
        points.append(raw)
    if len(points) > 1 and workers != 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_point, points))
    else:
        results = [_sweep_point(p) for p in points]
    em = Emitted(results={"parameter": key, "values": values})
    depths = _depth_grid(scenario)
    combined = []
    for i, (v, (rows, summary)) in enumerate(zip(values, results)):
        em.files.append(write_csv(out / f"sweep_{i:03d}.csv", PROFILE_HEADER, rows))
        mean_by_f = {s[0]: s[1:] for s in summary}
        for r in _at_depths(rows, depths):
            combined.append((v, *r[:4], *mean_by_f[r[1]]))
    header = ("parameter_value", "depth_m", "frequency_hz", "pressure_pa", "robot_power_w",
              "mean_robot_power_w", "total_swarm_power_w")
    summary_path = write_csv(out / "sweep_summary.csv", header, combined)
    em.files.append(summary_path)
    if plot:
        deepest = max(depths)
        rows = [r for r in combined if round(float(r[1]), 12) == round(deepest, 12)]
        deep_csv = write_csv(out / "sweep_deepest.csv", header, rows)
        em.files.append(deep_csv)
        spec = PlotSpec("frequency_hz", ("robot_power_w",), group="parameter_value", xlabel="frequency (kHz)",
                        ylabel=f"robot power at {deepest * 100:g} cm (pW)", x_scale=1e-3, y_scale=1e12)
        em.files.append(emit_plot(deep_csv, spec, out / "sweep.svg"))
    return em


def run(request: RunRequest) -> int:
    try:
        raw = apply_overrides(load_scenario_dict(request.scenario), list(request.overrides))
        scenario = resolve(raw)
        if request.command == "validate":
            print(f"{request.scenario}: ok")
            return EXIT_OK
        out = Path(request.out)
        out.mkdir(parents=True, exist_ok=True)
        if request.command == "sweep":
            em = sweep(scenario, out, request.plot, request.workers)
        else:
            handler = {"power-profile": power_profile, "cross-sections": cross_sections,
                       "swarm-profile": swarm_profile, "mitigate": mitigate}[request.command]
            em = handler(scenario, out, request.plot)
        manifest = write_manifest(out, request.command, Path(request.scenario), list(request.overrides),
                                  scenario_to_dict(scenario), em.files, _plain(em.results))
        for path in [*em.files, manifest]:
            print(path)
        return EXIT_OK
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for v in exc.violations:
            print(f"  {v}", file=sys.stderr)
        return EXIT_INVALID
    except (ValidityError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ConvergenceError as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="acouswarm", description="Acoustic power for microscopic robot swarms.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--scenario", required=True, type=Path, help="scenario JSON file")
    parser.add_argument("--out", type=Path, default=Path("out"), help="output directory (default: out)")
    parser.add_argument("--plot", action="store_true", help="also render SVG plots from the CSVs")
    parser.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="override a scenario value by dotted path, e.g. swarm.robot_count=1e11")
    parser.add_argument("--workers", type=int, default=None, help="processes for sweeps (default: CPU count)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    request = RunRequest(args.command, args.scenario, args.out, tuple(args.overrides), args.plot, args.workers)
    return run(request)


if __name__ == "__main__":
    sys.exit(main())
