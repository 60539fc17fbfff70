"""Swarm strategies that reshape attenuation: power caps, two frequencies, path avoidance, synchronized bursts."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ._ode import locate_event, rk4_step
from .errors import ConvergenceError
from .piston import capped_load
from .scenario import (
    SAFETY_INTENSITY,
    AvoidPath,
    FrequencyShare,
    NoMitigation,
    PowerCap,
    Scenario,
    SourceSpec,
    SplitFrequency,
    SyncDutyCycle,
)
from .swarm import (
    CONVERGENCE_TOLERANCE,
    DensityProfile,
    FieldProfile,
    RobotResponse,
    check_converged,
    interface_jumps,
    knots,
    propagate_profile,
    robot_attenuation,
    sample_depths,
    scenario_profile,
    tissue_rate,
)
from .tissue import source_intensity_for_pressure, source_pressure

__all__ = [
    "DualFrequencyProfile",
    "SyncBurst",
    "avoid_path_profile",
    "capped_load",
    "capped_profile",
    "dual_frequency_budget",
    "dual_frequency_profile",
    "run_strategy",
    "synchronized_burst_power",
]


@dataclass(frozen=True)
class DualFrequencyProfile:
    low: FieldProfile
    high: FieldProfile
    chosen_frequency: np.ndarray
    delivered_power: np.ndarray
    crossover_depth: float | None  # None when robots never leave the high frequency

    @property
    def depth(self) -> np.ndarray:
        return self.low.depth


@dataclass(frozen=True)
class SyncBurst:
    depth: np.ndarray
    baseline_power: np.ndarray
    burst_power: np.ndarray
    average_power: np.ndarray
    off_fraction: float


def capped_profile(scenario: Scenario, f: float, cap: float) -> FieldProfile:
    """Profile when each robot limits itself to ``cap`` watts by loading its pistons more heavily."""
    return scenario_profile(scenario, f, PowerCap(cap))


def avoid_path_profile(
    scenario: Scenario, f: float, avoided_range: tuple[float, float], redistribute: bool = False
) -> FieldProfile:
    start, end = avoided_range
    if not 0 <= start <= end <= scenario.path.total_length * (1 + 1e-12):
        raise ValueError(f"avoided range {avoided_range!r} is not within the path")
    return scenario_profile(scenario, f, AvoidPath(avoided_range, redistribute))


def synchronized_burst_power(
    scenario: Scenario, f: float, off_fraction: float, shallow_range: tuple[float, float]
) -> SyncBurst:
    """Two-phase schedule: for ``off_fraction`` of the time robots in ``shallow_range`` stop harvesting.

    Returns the baseline (everyone harvesting), the burst available during the
    off phase, and their time average at each depth.
    """
    if not 0 <= off_fraction < 1:
        raise ValueError(f"off fraction must be in [0, 1), got {off_fraction!r}")
    args = (scenario.source, scenario.path, f, scenario.robot, DensityProfile.from_swarm(scenario.swarm))
    kw = dict(fluid=scenario.fluid, numerics=scenario.numerics)
    baseline = propagate_profile(*args, **kw)
    burst = propagate_profile(*args, passive_range=shallow_range, **kw) if off_fraction > 0 else baseline
    average = off_fraction * burst.robot_power + (1 - off_fraction) * baseline.robot_power
    return SyncBurst(baseline.depth, baseline.robot_power, burst.robot_power, average, off_fraction)


def dual_frequency_budget(source: SourceSpec, medium) -> float:
    """Transducer intensity needed for the configured skin amplitudes of all frequencies."""
    return sum(
        source_intensity_for_pressure(source_pressure(source, medium, s.share), source.reflection_loss_fraction, medium)
        for s in source.frequencies
    )


def _dual_run(
    p_low: float,
    p_high: float,
    f_low: float,
    f_high: float,
    scenario: Scenario,
    threshold: float,
    step: float,
) -> DualFrequencyProfile:
    path = scenario.path
    density = DensityProfile.from_swarm(scenario.swarm)
    response = RobotResponse(scenario.robot, scenario.fluid, None, scenario.numerics.include_passive)
    samples = sample_depths(path, scenario.numerics)
    nodes = knots(path, samples, density.breakpoints())
    sample_set = set(samples.tolist())
    jumps = interface_jumps(path)

    def gap(y) -> float:
        return response.power(math.exp(y[1]), f_high) - threshold

    def rates(mid: float, high: bool):
        t_low, t_high = tissue_rate(path, f_low, mid), tissue_rate(path, f_high, mid)
        n = 0.5 * density.density(mid)

        def rhs(x, y):
            p_low_, p_high_ = math.exp(y[0]), math.exp(y[1])
            return np.array(
                [
                    -(t_low + n * response.sigma(p_low_, f_low, not high)),
                    -(t_high + n * response.sigma(p_high_, f_high, high)),
                ]
            )

        return rhs

    y = np.log(np.array([p_low, p_high], dtype=float)) if p_high > 0 else np.array([math.log(p_low), -math.inf])
    high = gap(y) >= 0
    crossover = None if high else 0.0
    rows = []
    for i, x in enumerate(nodes):
        if x in jumps:
            y = y + jumps[x]
            now_high = gap(y) >= 0
            if high and not now_high and crossover is None:
                crossover = float(x)
            high = now_high
        if x in sample_set:
            pl, ph = math.exp(y[0]), math.exp(y[1])
            n = density.density(x)
            rows.append(
                (
                    x,
                    pl,
                    ph,
                    response.power(pl, f_low),
                    response.power(ph, f_high),
                    robot_attenuation(n, response.sigma(pl, f_low, not high)),
                    robot_attenuation(n, response.sigma(ph, f_high, high)),
                    f_high if high else f_low,
                )
            )
        if i + 1 == len(nodes):
            break
        b = nodes[i + 1]
        m = max(1, math.ceil((b - x) / step - 1e-9))
        h = (b - x) / m
        mid = 0.5 * (x + b)
        rhs = rates(mid, high)
        for k in range(m):
            t, t_end = x + k * h, x + (k + 1) * h
            while t_end - t > 1e-15:
                trial = rk4_step(rhs, t, y, t_end - t)
                if (gap(trial) >= 0) == high:
                    y, t = trial, t_end
                    continue
                s = locate_event(rhs, t, y, t_end - t, gap)
                y = rk4_step(rhs, t, y, s)
                t += s
                if high and crossover is None:
                    crossover = t
                high = not high
                rhs = rates(mid, high)
                if s == 0.0:  # already on the threshold: take the step in the new mode
                    y, t = rk4_step(rhs, t, y, t_end - t), t_end

    d, pl, ph, wl, wh, al, ah, chosen = (np.array(c) for c in zip(*rows))
    return DualFrequencyProfile(
        low=FieldProfile(f_low, d, pl, wl, al, step),
        high=FieldProfile(f_high, d, ph, wh, ah, step),
        chosen_frequency=chosen,
        delivered_power=np.where(chosen == f_high, wh, wl),
        crossover_depth=crossover,
    )


def dual_frequency_profile(
    scenario: Scenario,
    f_low: float,
    f_high: float,
    shares: tuple[float, float],
    threshold: float,
    check: bool = True,
) -> DualFrequencyProfile:
    """Robots harvest the high frequency while it gives them at least ``threshold`` watts, else the low one.

    Both waves are integrated together; the idle frequency sees only tissue and
    passive robot losses. The switch depth is located inside the step.
    """
    if shares[0] < 0 or shares[1] < 0 or sum(shares) > 1 + 1e-12:
        raise ValueError(f"intensity shares must be >= 0 and sum to <= 1, got {shares!r}")
    source = replace(
        scenario.source,
        frequencies=(FrequencyShare(f_low, shares[0]), FrequencyShare(f_high, shares[1])),
    )
    medium = scenario.path.segments[0][0]
    budget = dual_frequency_budget(source, medium)
    if budget > SAFETY_INTENSITY * (1 + 1e-9):
        raise ValueError(f"two-frequency source needs {budget:.1f} W/m^2, above the {SAFETY_INTENSITY:.0f} W/m^2 limit")
    p_low = source_pressure(source, medium, shares[0])
    p_high = source_pressure(source, medium, shares[1])
    step = scenario.numerics.step
    result = _dual_run(p_low, p_high, f_low, f_high, scenario, threshold, step)
    if check:
        fine = _dual_run(p_low, p_high, f_low, f_high, scenario, threshold, step / 2)
        check_converged(result.low, fine.low, "dual-frequency low")
        check_converged(result.high, fine.high, "dual-frequency high")
        a, b = result.crossover_depth, fine.crossover_depth
        if (a is None) != (b is None) or (a is not None and abs(a - b) > CONVERGENCE_TOLERANCE * max(abs(b), 1e-3)):
            raise ConvergenceError(f"crossover depth moved on halving the step ({a!r} vs {b!r})")
    return result


def run_strategy(scenario: Scenario, f: float | None = None):
    """Evaluate the scenario's configured mitigation; ``f`` defaults to the first source frequency."""
    strategy = scenario.mitigation
    f = scenario.source.frequencies[0].frequency if f is None else f
    if isinstance(strategy, (NoMitigation, PowerCap, AvoidPath)):
        return scenario_profile(scenario, f, strategy)
    if isinstance(strategy, SplitFrequency):
        (lo, hi) = sorted(scenario.source.frequencies, key=lambda s: s.frequency)
        return dual_frequency_profile(scenario, lo.frequency, hi.frequency, (lo.share, hi.share), strategy.threshold)
    if isinstance(strategy, SyncDutyCycle):
        return synchronized_burst_power(scenario, f, strategy.off_fraction, strategy.shallow_depth_range)
    raise TypeError(f"unknown mitigation {strategy!r}")
