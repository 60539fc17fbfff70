"""Piston harvester: drag, drive parameter, load choice and extracted power.

The piston moves at terminal velocity, k_total dx/dt = p A cos(wt), and halts
at +/-a until the applied force reverses. In normalized form
dX/dtau = lam / (1 + k_ratio) cos(tau) with lam = p A / (a w k_f).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._ode import locate_event, rk4_step
from .errors import ConvergenceError
from .scenario import FluidMedium, PistonGeometry, RobotDesign


@dataclass(frozen=True)
class DragCoefficients:
    k_viscous: float
    k_sliding_area: float
    k_f: float
    k_load: float
    k_total: float


@dataclass(frozen=True)
class DriveState:
    lam: float
    k_ratio: float
    angular_frequency: float
    pressure_amplitude: float


@dataclass(frozen=True)
class PistonTrajectory:
    tau: np.ndarray
    position: np.ndarray
    mean_load_power: float
    mean_total_power: float
    stopped_fraction: float
    lam: float
    k_ratio: float


def drag_coefficients(
    geom: PistonGeometry, robot: RobotDesign, fluid: FluidMedium, k_ratio: float = 1.0
) -> DragCoefficients:
    k_viscous = robot.drag_factor * geom.diameter * fluid.dynamic_viscosity
    k_sliding_area = robot.sliding_drag_coefficient * (geom.sliding_area_piston + robot.spring.overlap_area_bound)
    k_f = k_viscous + k_sliding_area
    k_load = k_ratio * k_f
    return DragCoefficients(k_viscous, k_sliding_area, k_f, k_load, k_f + k_load)


def internal_drag(robot: RobotDesign, fluid: FluidMedium) -> float:
    return drag_coefficients(robot.piston, robot, fluid).k_f


def lambda_param(p: float, f: float, geom: PistonGeometry, k_f: float) -> float:
    return p * geom.face_area / (geom.half_range * 2 * math.pi * f * k_f)


def optimal_load(lam: float) -> float:
    """Load ratio k_load/k_f: matched load below lam = 2, else the smallest load avoiding the stops."""
    return 1.0 if lam <= 2 else lam - 1.0


def drive_state(p: float, f: float, geom: PistonGeometry, k_f: float) -> DriveState:
    lam = lambda_param(p, f, geom, k_f)
    return DriveState(lam, optimal_load(lam), 2 * math.pi * f, p)


def sinusoidal_power(p: float, geom: PistonGeometry, k_f: float, k_ratio: float) -> tuple[float, float]:
    """(P_load, P_total) when the piston never reaches its stops (lam <= 1 + k_ratio)."""
    k_total = k_f * (1 + k_ratio)
    p_total = 0.5 * (geom.face_area * p) ** 2 / k_total
    return p_total * k_ratio / (1 + k_ratio), p_total


def piston_power(p: float, f: float, geom: PistonGeometry, k_f: float) -> tuple[float, float, float]:
    """(P_load, P_total, k_ratio) per piston at the load chosen by ``optimal_load``."""
    lam = lambda_param(p, f, geom, k_f)
    k_ratio = optimal_load(lam)
    if lam <= 2:
        p_load = (geom.face_area * p) ** 2 / (8 * k_f)
    else:
        aw = geom.half_range * 2 * math.pi * f
        p_load = 0.5 * aw * (geom.face_area * p - aw * k_f)
    return p_load, p_load * (1 + k_ratio) / k_ratio, k_ratio


def capped_load(p: float, f: float, geom: PistonGeometry, k_f: float, cap: float) -> float:
    """Load ratio that holds per-piston P_load at ``cap``, or the optimal load if the cap does not bind.

    A binding cap is met by a heavier load (slower, sinusoidal motion): the
    larger root of A^2 p^2 k_ratio / (2 k_f (1 + k_ratio)^2) = cap.
    """
    if cap <= 0:
        raise ValueError(f"cap must be > 0, got {cap!r}")
    best, _, k_ratio = piston_power(p, f, geom, k_f)
    if best <= cap:
        return k_ratio
    q = (geom.face_area * p) ** 2 / (2 * k_f * cap)  # > 4 whenever the cap binds
    b = q - 2
    return 0.5 * (b + math.sqrt(max(b * b - 4, 0.0)))


def displacement_range(p: float, f: float, geom: PistonGeometry, k_f: float) -> float:
    """Peak-to-peak travel at the optimal load."""
    lam = lambda_param(p, f, geom, k_f)
    return min(2 * geom.half_range, 2 * geom.half_range * lam / (1 + optimal_load(lam)))


def robot_power(robot: RobotDesign, p: float, f: float, fluid: FluidMedium) -> float:
    k_f = internal_drag(robot, fluid)
    return robot.num_pistons * robot.duty_cycle * piston_power(p, f, robot.piston, k_f)[0]


def simulate_piston(
    p: float,
    f: float,
    geom: PistonGeometry,
    k_f: float,
    k_ratio: float,
    cycles: int = 4,
    steps_per_cycle: int = 400,
    check: bool = True,
) -> PistonTrajectory:
    """Time-step the clamped first-order piston equation from X(0) = 0.

    RK4 on a fixed grid in tau; clamp engagement is located inside a step by
    root-finding on the step map, release at the sign change of cos(tau).
    Mean powers are taken over the last full cycle. With ``check`` the run is
    repeated at half the step and a ConvergenceError raised if either mean
    power moves by more than 0.5 %.
    """
    if steps_per_cycle < 200 or cycles < 2:
        raise ValueError("need steps_per_cycle >= 200 and cycles >= 2")
    lam = lambda_param(p, f, geom, k_f)
    amp = lam / (1 + k_ratio)

    def rhs(tau, y):
        v = amp * math.cos(tau)
        return np.array([v, v * v])

    h = 2 * math.pi / steps_per_cycle
    n_steps = cycles * steps_per_cycle
    final_start = (cycles - 1) * steps_per_cycle

    y = np.zeros(2)  # position X, accumulated integral of (dX/dtau)^2
    mode = 0  # 0 moving, +1 / -1 held at that stop
    stopped = 0.0
    energy_mark = stopped_mark = 0.0
    taus = np.empty(n_steps + 1)
    xs = np.empty(n_steps + 1)
    taus[0], xs[0] = 0.0, 0.0

    for i in range(n_steps):
        if i == final_start:
            energy_mark, stopped_mark = y[1], stopped
        t, t_end = i * h, (i + 1) * h
        while t_end - t > 1e-15:
            if mode == 0:
                trial = rk4_step(rhs, t, y, t_end - t)
                if abs(trial[0]) <= 1:
                    y, t = trial, t_end
                    continue
                stop = math.copysign(1.0, trial[0])
                s = locate_event(rhs, t, y, t_end - t, lambda z: z[0] - stop)
                y = rk4_step(rhs, t, y, s)
                y[0] = stop
                mode = int(stop)
                t += s
            else:
                # held while the drive pushes toward the stop, i.e. sign(cos) == mode
                if mode * math.cos(t_end) > 0:
                    stopped += t_end - t
                    t = t_end
                    continue
                release = t if mode * math.cos(t) <= 0 else _cos_root(t, t_end)
                stopped += release - t
                t = release
                mode = 0
        taus[i + 1], xs[i + 1] = t_end, y[0]

    mean_v2 = (y[1] - energy_mark) / (2 * math.pi)
    aw = geom.half_range * 2 * math.pi * f
    k_load = k_ratio * k_f
    traj = PistonTrajectory(
        tau=taus,
        position=xs,
        mean_load_power=k_load * aw * aw * mean_v2,
        mean_total_power=(k_f + k_load) * aw * aw * mean_v2,
        stopped_fraction=(stopped - stopped_mark) / (2 * math.pi),
        lam=lam,
        k_ratio=k_ratio,
    )
    if check:
        fine = simulate_piston(p, f, geom, k_f, k_ratio, cycles, 2 * steps_per_cycle, check=False)
        for coarse_v, fine_v in ((traj.mean_load_power, fine.mean_load_power),
                                 (traj.mean_total_power, fine.mean_total_power)):
            if abs(coarse_v - fine_v) > 5e-3 * max(abs(fine_v), 1e-300):
                raise ConvergenceError(
                    f"piston power changed by more than 0.5% on halving the step ({coarse_v!r} vs {fine_v!r})"
                )
    return traj


def _cos_root(a: float, b: float) -> float:
    from scipy.optimize import brentq

    return brentq(math.cos, a, b, xtol=1e-15)
