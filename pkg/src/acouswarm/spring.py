"""Constant-force spring statics, ambient tracking cost and stiction estimate."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import SpringRangeError
from .scenario import PistonGeometry, SpringSpec


@dataclass(frozen=True)
class SpringState:
    perpendicular_overlap: float
    parallel_overlap: float
    force: float


def overlap_for_pressure(p_ambient: float, geom: PistonGeometry, spec: SpringSpec) -> float:
    """Perpendicular overlap whose spring force balances ambient pressure on the piston face."""
    if p_ambient < 0:
        raise ValueError(f"ambient pressure must be >= 0, got {p_ambient!r}")
    overlap = p_ambient * geom.face_area / spec.spring_constant
    if overlap > spec.max_perp_overlap:
        raise SpringRangeError(
            f"overlap {overlap:.3e} m needed for {p_ambient:.4g} Pa exceeds the limit {spec.max_perp_overlap:.3e} m"
        )
    return overlap


def spring_state(p_ambient: float, geom: PistonGeometry, spec: SpringSpec, parallel_overlap: float | None = None) -> SpringState:
    overlap = overlap_for_pressure(p_ambient, geom, spec)
    h = spec.max_parallel_overlap if parallel_overlap is None else parallel_overlap
    if not 0 <= h <= spec.max_parallel_overlap:
        raise SpringRangeError(f"parallel overlap {h!r} outside [0, {spec.max_parallel_overlap!r}]")
    return SpringState(overlap, h, spec.spring_constant * overlap)


def adjustment_dissipation(delta_l: float, delta_t: float, overlap_area: float, k_sliding: float) -> float:
    """Mean sliding-drag power while the overlap changes by ``delta_l`` over ``delta_t``."""
    if delta_t <= 0:
        raise ValueError(f"delta_t must be > 0, got {delta_t!r}")
    speed = delta_l / delta_t
    return k_sliding * overlap_area * speed * speed


def actuator_work(force: float, delta_l: float) -> float:
    """Work done moving the spring mount, all of it counted as dissipated."""
    return force * delta_l


def vdw_stiction(contact_area: float, separation: float, hamaker: float) -> float:
    """Van der Waals attraction between flat surfaces, hamaker / (6 pi d^3) per unit area."""
    if separation <= 0:
        raise ValueError(f"separation must be > 0, got {separation!r}")
    return hamaker / (6 * math.pi * separation**3) * contact_area
