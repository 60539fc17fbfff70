"""Pressure propagation through tissue populated by absorbing robots.

The log amplitude y = ln p obeys dy/dx = -(alpha_tissue f + n m(x) sigma(p) / 2),
integrated inward with fixed-step RK4 between breakpoints (tissue interfaces,
density segment edges, sample depths). Interfaces are applied as exact jumps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from ._ode import rk4_step
from .cross_sections import dissipation_cross_section, scattering_cross_section, surface_response
from .errors import ConvergenceError
from .piston import capped_load, internal_drag, lambda_param, optimal_load, piston_power, sinusoidal_power
from .scenario import (
    AvoidPath,
    DensitySegment,
    FluidMedium,
    NoMitigation,
    Numerics,
    PowerCap,
    RobotDesign,
    Scenario,
    SourceSpec,
    SwarmScenario,
    TissuePath,
)
from .tissue import flux_from_pressure, source_pressure

_ROUND = 12  # depths are compared after rounding to 1e-12 m
CONVERGENCE_TOLERANCE = 1e-3


@dataclass(frozen=True)
class DensityProfile:
    """Base number density times piecewise-constant multipliers on [start, end).

    Overlapping segments multiply; depths outside every segment use 1.
    """

    base_density: float
    segments: tuple[DensitySegment, ...] = ()

    @classmethod
    def from_swarm(cls, swarm: SwarmScenario) -> DensityProfile:
        return cls(number_density(swarm.robot_count, swarm.body_volume)[0], tuple(swarm.density_profile))

    def multiplier(self, x: float) -> float:
        m = 1.0
        for seg in self.segments:
            if seg.start <= x < seg.end:
                m *= seg.multiplier
        return m

    def density(self, x: float) -> float:
        return self.base_density * self.multiplier(x)

    def breakpoints(self) -> list[float]:
        return sorted({v for seg in self.segments for v in (seg.start, seg.end)})

    def integral(self, length: float) -> float:
        """Integral of n(x) dx over [0, length]; exact for the piecewise-constant profile."""
        edges = sorted({0.0, length, *(b for b in self.breakpoints() if 0 < b < length)})
        return sum(self.density(0.5 * (a + b)) * (b - a) for a, b in zip(edges[:-1], edges[1:]))

    def without(self, depth_range: tuple[float, float], length: float, redistribute: bool = False) -> DensityProfile:
        """Profile with no robots in ``depth_range``; optionally rescaled so the path integral is unchanged."""
        start, end = depth_range
        if end <= start:
            return self
        removed = replace(self, segments=self.segments + (DensitySegment(start, end, 0.0),))
        if not redistribute:
            return removed
        before, after = self.integral(length), removed.integral(length)
        if after <= 0:
            raise ValueError("avoided range leaves no robots on the path to redistribute")
        return replace(removed, base_density=self.base_density * before / after)


@dataclass(frozen=True)
class FieldProfile:
    frequency: float
    depth: np.ndarray
    pressure: np.ndarray
    robot_power: np.ndarray
    alpha_robot: np.ndarray
    step: float


def number_density(n_robots: float, body_volume: float) -> tuple[float, float | None]:
    """(n, typical spacing n^(-1/3)); spacing is None when there are no robots."""
    if body_volume <= 0:
        raise ValueError(f"body volume must be > 0, got {body_volume!r}")
    n = n_robots / body_volume
    return n, (n ** (-1.0 / 3.0) if n > 0 else None)


def robot_attenuation(n: float, sigma: float) -> float:
    """Amplitude attenuation rate n sigma / 2 of incoherently absorbing robots."""
    if n < 0 or sigma < 0:
        raise ValueError("density and cross section must be >= 0")
    return 0.5 * n * sigma


@dataclass(frozen=True)
class RobotResponse:
    """Per-robot absorption and harvested power at a given frequency and pressure.

    ``cap`` limits each robot's delivered power by loading the pistons more
    heavily. Passive terms (scattering plus boundary-layer loss) are added to
    the cross section only when ``include_passive`` is set.
    """

    robot: RobotDesign
    fluid: FluidMedium = field(default_factory=FluidMedium)
    cap: float | None = None
    include_passive: bool = False

    def __post_init__(self):
        object.__setattr__(self, "k_f", internal_drag(self.robot, self.fluid))

    def _load(self, p: float, f: float) -> tuple[float, float, float]:
        """(P_load, P_total, k_ratio) per piston."""
        geom = self.robot.piston
        if self.cap is None:
            return piston_power(p, f, geom, self.k_f)
        per_piston = self.cap / (self.robot.num_pistons * self.robot.duty_cycle)
        k_ratio = capped_load(p, f, geom, self.k_f, per_piston)
        if k_ratio == optimal_load(lambda_param(p, f, geom, self.k_f)):
            return piston_power(p, f, geom, self.k_f)
        return (*sinusoidal_power(p, geom, self.k_f, k_ratio), k_ratio)

    def power(self, p: float, f: float) -> float:
        if p <= 0 or self.robot.num_pistons == 0:
            return 0.0
        return self.robot.num_pistons * self.robot.duty_cycle * self._load(p, f)[0]

    def absorption(self, p: float, f: float) -> float:
        r = self.robot
        if r.num_pistons == 0 or r.radius == 0:
            return 0.0
        if p <= 0:  # low-drive limit of P_total / flux
            return r.duty_cycle * r.num_pistons * r.piston.face_area**2 * self.fluid.density * self.fluid.sound_speed / (
                2 * self.k_f
            )
        return r.duty_cycle * r.num_pistons * self._load(p, f)[1] / flux_from_pressure(p, self.fluid)

    def passive(self, p: float, f: float, locked: bool = False) -> float:
        r = self.robot
        if not self.include_passive or r.radius == 0:
            return 0.0
        k_ratio = 1.0 if p <= 0 else self._load(p, f)[2]
        response = surface_response(r, self.k_f * (1 + k_ratio), self.fluid, locked)
        k = 2 * math.pi * f / self.fluid.sound_speed
        return scattering_cross_section(r.radius, k, response.beta_c_rho) + dissipation_cross_section(
            r.radius, f, self.fluid, response.beta
        )

    def sigma(self, p: float, f: float, absorbing: bool = True) -> float:
        """Cross section of a robot that is harvesting, or idle (pistons held) when not ``absorbing``."""
        if absorbing:
            return self.absorption(p, f) + self.passive(p, f)
        return self.passive(p, f, locked=True)


def skin_pressure(source: SourceSpec, path: TissuePath, f: float) -> float:
    """Skin amplitude at ``f``: the share configured for it, or the full source otherwise."""
    share = next((s.share for s in source.frequencies if s.frequency == f), 1.0)
    return source_pressure(source, path.segments[0][0], share)


def sample_depths(path: TissuePath, numerics: Numerics) -> np.ndarray:
    length = path.total_length
    n = int(round(length / numerics.sample_spacing))
    grid = np.linspace(0.0, length, n + 1)
    extra = [d for d in numerics.depths if 0 <= d <= length]
    return np.unique(np.round(np.concatenate([grid, extra]), _ROUND))


def knots(path: TissuePath, samples: np.ndarray, extra=()) -> np.ndarray:
    """Breakpoints of the depth integration: samples, interfaces and any extra edges inside the path."""
    length = path.total_length
    inner = [b for b in (*path.boundaries, *extra) if 0 < b < length]
    return np.unique(np.round(np.concatenate([samples, inner, [0.0, length]]), _ROUND))


def interface_jumps(path: TissuePath) -> dict[float, float]:
    return {
        round(b, _ROUND): 0.5 * math.log(t) for b, t in zip(path.boundaries, path.interface_energy_transmission)
    }


def tissue_rate(path: TissuePath, f: float, x: float) -> float:
    return path.segments[path.segment_index(x)][0].absorption * f


def march(
    y0,
    nodes: np.ndarray,
    jumps: dict[float, float],
    rhs_for: Callable[[float], Callable],
    step: float,
    record: Callable[[int, float, object], None],
) -> None:
    """Integrate from node to node, applying interface jumps on arrival and recording at every node.

    ``rhs_for(mid)`` gives the derivative for the interval with midpoint ``mid``.
    """
    y = y0
    for i, x in enumerate(nodes):
        if x in jumps:
            y = y + jumps[x]
        record(i, x, y)
        if i + 1 == len(nodes):
            break
        b = nodes[i + 1]
        n = max(1, math.ceil((b - x) / step - 1e-9))
        h = (b - x) / n
        rhs = rhs_for(0.5 * (x + b))
        for k in range(n):
            y = rk4_step(rhs, x + k * h, y, h)


def _single_profile(
    p0: float,
    path: TissuePath,
    f: float,
    response: RobotResponse,
    density: DensityProfile,
    samples: np.ndarray,
    step: float,
    passive_range: tuple[float, float] | None,
) -> FieldProfile:
    extra = list(density.breakpoints()) + (list(passive_range) if passive_range else [])
    nodes = knots(path, samples, extra)
    sample_set = set(samples.tolist())
    jumps = interface_jumps(path)

    def absorbing(x: float) -> bool:
        return passive_range is None or not (passive_range[0] <= x < passive_range[1])

    def rhs_for(mid: float):
        tissue = tissue_rate(path, f, mid)
        n = density.density(mid)
        harvesting = absorbing(mid)
        if n == 0:
            return lambda x, y: -tissue
        return lambda x, y: -(tissue + 0.5 * n * response.sigma(math.exp(y), f, harvesting))

    out = []

    def record(i, x, y):
        if x in sample_set:
            p = math.exp(y)
            harvesting = absorbing(x)
            power = response.power(p, f) if harvesting else 0.0
            out.append((x, p, power, robot_attenuation(density.density(x), response.sigma(p, f, harvesting))))

    march(math.log(p0), nodes, jumps, rhs_for, step, record)
    arr = np.array(out).T
    return FieldProfile(f, arr[0], arr[1], arr[2], arr[3], step)


def check_converged(coarse: FieldProfile, fine: FieldProfile, what: str = "profile") -> None:
    for name in ("pressure", "robot_power"):
        a, b = getattr(coarse, name), getattr(fine, name)
        scale = np.maximum(np.abs(a), np.abs(b))
        bad = np.abs(a - b) > CONVERGENCE_TOLERANCE * scale
        if np.any(bad):
            i = int(np.argmax(bad))
            raise ConvergenceError(
                f"{what} at f={coarse.frequency:.6g} Hz: {name} at depth {coarse.depth[i]:.4g} m changed by more "
                f"than 0.1% when the step was halved ({a[i]!r} vs {b[i]!r})"
            )


def propagate_profile(
    source: SourceSpec | float,
    path: TissuePath,
    f: float,
    robot: RobotDesign,
    density: DensityProfile,
    strategy=None,
    fluid: FluidMedium | None = None,
    numerics: Numerics | None = None,
    passive_range: tuple[float, float] | None = None,
    check: bool = True,
) -> FieldProfile:
    """Pressure, robot power and robot attenuation versus depth at frequency ``f``.

    ``source`` is a SourceSpec or the skin amplitude in Pa. ``strategy`` may be
    NoMitigation, PowerCap or AvoidPath; the two-profile strategies live in
    ``acouswarm.mitigation``. Robots inside ``passive_range`` hold their pistons
    and harvest nothing. With ``check`` the run is repeated at half the step and
    a ConvergenceError raised if any sampled pressure or power moves by > 0.1%.
    """
    fluid = fluid or FluidMedium()
    numerics = numerics or Numerics()
    strategy = strategy or NoMitigation()
    cap = None
    if isinstance(strategy, PowerCap):
        cap = strategy.cap
    elif isinstance(strategy, AvoidPath):
        density = density.without(strategy.depth_range, path.total_length, strategy.redistribute)
    elif not isinstance(strategy, NoMitigation):
        raise TypeError(f"{type(strategy).__name__} needs acouswarm.mitigation, not a single profile")
    p0 = skin_pressure(source, path, f) if isinstance(source, SourceSpec) else float(source)
    response = RobotResponse(robot, fluid, cap, numerics.include_passive)
    samples = sample_depths(path, numerics)
    profile = _single_profile(p0, path, f, response, density, samples, numerics.step, passive_range)
    if check:
        fine = _single_profile(p0, path, f, response, density, samples, numerics.step / 2, passive_range)
        check_converged(profile, fine)
    return profile


def scenario_profile(scenario: Scenario, f: float, strategy=None, check: bool = True) -> FieldProfile:
    return propagate_profile(
        scenario.source,
        scenario.path,
        f,
        scenario.robot,
        DensityProfile.from_swarm(scenario.swarm),
        strategy,
        scenario.fluid,
        scenario.numerics,
        check=check,
    )


def swarm_power_summary(profile: FieldProfile, density: DensityProfile, n_robots: float) -> tuple[float, float]:
    """(density-weighted mean robot power over depth, mean times robot count).

    Each sample is weighted by the density just below it, with trapezoid spacing.
    """
    if n_robots == 0 or density.base_density == 0:
        return 0.0, 0.0
    x = profile.depth
    widths = np.zeros_like(x)
    widths[1:] += 0.5 * np.diff(x)
    widths[:-1] += 0.5 * np.diff(x)
    weights = widths * np.array([density.density(v) for v in x])
    if weights.sum() == 0:
        return 0.0, 0.0
    mean = float(np.dot(weights, profile.robot_power) / weights.sum())
    return mean, mean * n_robots
