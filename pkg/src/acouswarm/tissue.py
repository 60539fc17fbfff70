"""Plane-wave pressure/flux conversion and robot-free propagation along tissue paths."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .scenario import FluidMedium, SourceSpec, TissueMedium, TissuePath


@dataclass(frozen=True)
class DepthPressure:
    depth: float
    pressure_amplitude: float
    frequency: float


def pressure_from_intensity(intensity: float, medium: FluidMedium | TissueMedium) -> float:
    """Pressure amplitude of a plane wave carrying time-average flux ``intensity``."""
    if intensity < 0:
        raise ValueError(f"intensity must be >= 0, got {intensity!r}")
    return math.sqrt(2 * medium.density * medium.sound_speed * intensity)


def flux_from_pressure(p: float, medium: FluidMedium | TissueMedium) -> float:
    """Time-average energy flux p^2 / (2 rho c) of a plane wave with amplitude ``p``."""
    if p < 0:
        raise ValueError(f"pressure amplitude must be >= 0, got {p!r}")
    return p * p / (2 * medium.density * medium.sound_speed)


def attenuate(p0: float, medium: TissueMedium, f: float, x: float) -> float:
    if x < 0:
        raise ValueError(f"distance must be >= 0, got {x!r}")
    return p0 * math.exp(-medium.absorption * f * x)


def source_pressure(source: SourceSpec, medium: FluidMedium | TissueMedium, share: float = 1.0) -> float:
    """Skin-side pressure amplitude for a fraction ``share`` of the source intensity.

    The reflection loss scales the amplitude. A nominal ``source.pressure``
    (when set) is used for the full intensity and scaled by sqrt(share).
    """
    if source.pressure is not None:
        return source.pressure * math.sqrt(share)
    return derived_source_pressure(source.intensity * share, source.reflection_loss_fraction, medium)


def derived_source_pressure(intensity: float, reflection_loss: float, medium: FluidMedium | TissueMedium) -> float:
    return (1 - reflection_loss) * pressure_from_intensity(intensity, medium)


def source_intensity_for_pressure(p: float, reflection_loss: float, medium: FluidMedium | TissueMedium) -> float:
    """Transducer intensity needed to put amplitude ``p`` into tissue; inverse of the above."""
    return flux_from_pressure(p / (1 - reflection_loss), medium)


def log_transmission(path: TissuePath, depth: float) -> float:
    """Sum of log amplitude factors from the interfaces at or above ``depth``."""
    total = 0.0
    for boundary, t in zip(path.boundaries, path.interface_energy_transmission):
        if depth >= boundary:
            total += 0.5 * math.log(t)
    return total


def tissue_exponent(path: TissuePath, f: float, depth: float) -> float:
    """Integral of alpha f dx from the skin to ``depth``."""
    total, top = 0.0, 0.0
    for medium, length in path.segments:
        if depth <= top:
            break
        total += medium.absorption * f * (min(depth, top + length) - top)
        top += length
    return total


def path_pressure(source: SourceSpec | float, path: TissuePath, f: float, depth: float) -> float:
    """Amplitude at ``depth`` below the skin.

    ``source`` is either a SourceSpec or the skin-side amplitude in Pa.

    Interfaces pass sqrt(energy transmission) of the amplitude and act at the
    boundary depth itself, so a depth exactly on an interface is on the deep side.
    """
    total = path.total_length
    if depth < 0 or depth > total * (1 + 1e-12):
        raise ValueError(f"depth {depth!r} outside path of length {total!r}")
    if isinstance(source, SourceSpec):
        source = source_pressure(source, path.segments[0][0])
    return source * math.exp(log_transmission(path, depth) - tissue_exponent(path, f, depth))
