"""Per-robot cross sections for removing energy from a plane wave.

Absorption comes from the pistons; scattering uses the long-wavelength closed
form, checked against a partial-wave solution; boundary-layer dissipation is
an analytic shear-layer estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import spherical_jn, spherical_yn

from .errors import ConvergenceError, ValidityError
from .piston import internal_drag, lambda_param, optimal_load, piston_power
from .scenario import MAX_KR, FluidMedium, RobotDesign, TissueMedium
from .tissue import flux_from_pressure


@dataclass(frozen=True)
class SurfaceResponse:
    beta: float  # m/(s Pa)
    beta_c_rho: float


@dataclass(frozen=True)
class CrossSectionBreakdown:
    absorption: float
    scattering: float
    boundary_dissipation: float
    total: float
    geometric: float


@dataclass(frozen=True)
class ModalCoefficients:
    coefficients: np.ndarray  # complex A_m, m = 0..m_max
    m_max: int

    @property
    def a0(self) -> complex:
        return complex(self.coefficients[0])

    @property
    def a1(self) -> complex:
        return complex(self.coefficients[1])


def surface_response(
    robot: RobotDesign, k_total: float, medium: FluidMedium | TissueMedium, locked: bool = False
) -> SurfaceResponse:
    """Mean radial surface velocity per unit pressure, beta = f_surface A / k_total.

    Locked pistons do not move, which makes the robot a hard sphere (beta = 0).
    """
    if k_total <= 0:
        raise ValueError(f"k_total must be > 0, got {k_total!r}")
    if locked:
        return SurfaceResponse(0.0, 0.0)
    beta = robot.surface_fraction_moving * robot.piston.face_area / k_total
    return SurfaceResponse(beta, beta * medium.sound_speed * medium.density)


def operating_k_total(robot: RobotDesign, p: float, f: float, fluid: FluidMedium) -> float:
    """Total piston drag at the load chosen for the local drive."""
    k_f = internal_drag(robot, fluid)
    return k_f * (1 + optimal_load(lambda_param(p, f, robot.piston, k_f)))


def _check_kr(r: float, k: float) -> None:
    if k * r >= MAX_KR:
        raise ValidityError(f"k r = {k * r:.4g} is outside the long-wavelength range (< {MAX_KR})")


def scattering_cross_section(r: float, k: float, beta_c_rho: float, fixed_center: bool = False) -> float:
    """Long-wavelength scattering cross section of a sphere with uniform surface response.

    With ``fixed_center`` the sphere does not follow the fluid's oscillation,
    which raises the hard-sphere coefficient from 4/9 to 7/9.
    """
    _check_kr(r, k)
    x2 = (k * r) ** 2
    b2 = beta_c_rho**2
    hard = (7.0 if fixed_center else 4.0) / 9.0
    return math.pi * r * r * (4 * x2 * b2 + hard * x2 * x2 - (16.0 / 3.0) * x2 * x2 * b2)


def modal_coefficients(
    r: float, k: float, beta: float, medium: FluidMedium | TissueMedium, m_max: int = 6, fixed_center: bool = False
) -> ModalCoefficients:
    """Scattered-wave coefficients A_m from matching the radial velocity on the sphere.

    Time dependence exp(-i w t). Per mode,
    -i (F_m j_m'(ka) + A_m h_m'(ka)) = -beta rho c F_m j_m(ka) + delta_{m1},
    where the delta term is the sphere following the incident fluid velocity.
    """
    if m_max < 2:
        raise ValueError(f"m_max must be >= 2, got {m_max!r}")
    x = k * r
    m = np.arange(m_max + 1)
    f_m = (1j) ** m * (2 * m + 1)
    j = spherical_jn(m, x)
    dj = spherical_jn(m, x, derivative=True)
    dh = dj + 1j * spherical_yn(m, x, derivative=True)
    bcr = beta * medium.density * medium.sound_speed
    rhs = -f_m * dj - 1j * bcr * f_m * j
    if not fixed_center:
        rhs = rhs + 1j * (m == 1)
    return ModalCoefficients(rhs / dh, m_max)


def scattered_power_fraction(
    coeffs: ModalCoefficients, k: float, radius: float, medium: FluidMedium | TissueMedium, n_theta: int = 64
) -> float:
    """Integral of 0.5 Re(v p*) of the scattered field over a sphere, divided by the incident flux.

    Uses unit incident amplitude and Gauss-Legendre quadrature in cos(theta).
    """
    mu, w = np.polynomial.legendre.leggauss(n_theta)
    m = np.arange(coeffs.m_max + 1)
    kr = k * radius
    h = spherical_jn(m, kr) + 1j * spherical_yn(m, kr)
    dh = spherical_jn(m, kr, derivative=True) + 1j * spherical_yn(m, kr, derivative=True)
    legendre = np.array([np.polynomial.legendre.Legendre.basis(n)(mu) for n in m])  # (m, theta)
    p = (coeffs.coefficients * h) @ legendre
    # v_r = -i/(w rho) dp/dr and k/(w rho) = 1/(rho c)
    v = (-1j / (medium.density * medium.sound_speed)) * ((coeffs.coefficients * dh) @ legendre)
    flux = 0.5 * np.real(v * np.conj(p))
    power = 2 * math.pi * radius * radius * np.dot(w, flux)
    return power / flux_from_pressure(1.0, medium)


def modal_scattering_oracle(
    r: float,
    k: float,
    beta: float,
    medium: FluidMedium | TissueMedium,
    m_max: int = 6,
    radius: float | None = None,
    fixed_center: bool = False,
    check_order: int = 12,
) -> float:
    """Scattering cross section from the partial-wave solution, integrated on a far sphere.

    Raises ConvergenceError if raising the truncation to ``check_order``
    changes the result by more than 1e-6 relative.
    """
    radius = 10.0 / k if radius is None else radius
    sigma = scattered_power_fraction(modal_coefficients(r, k, beta, medium, m_max, fixed_center), k, radius, medium)
    if check_order > m_max:
        ref = scattered_power_fraction(
            modal_coefficients(r, k, beta, medium, check_order, fixed_center), k, radius, medium
        )
        if abs(sigma - ref) > 1e-6 * abs(ref):
            raise ConvergenceError(f"modal sum not converged at m_max={m_max}: {sigma!r} vs {ref!r}")
    return sigma


def boundary_layer_lengths(f: float, fluid: FluidMedium) -> tuple[float, float]:
    if f <= 0:
        raise ValueError(f"frequency must be > 0, got {f!r}")
    w = 2 * math.pi * f
    viscous = math.sqrt(2 * fluid.dynamic_viscosity / (fluid.density * w))
    thermal = math.sqrt(2 * fluid.thermal_conductivity / (fluid.density * fluid.heat_capacity_cp * w))
    return viscous, thermal


def dissipation_cross_section(r: float, f: float, fluid: FluidMedium, beta: float = 0.0) -> float:
    """Viscous boundary-layer loss expressed as a cross section.

    Shear term: the acoustic tangential slip (3/2) v sin(theta) over a surface
    that does not follow it, dissipated at rho w delta_v |v_t|^2 / 4 per unit
    area, gives 3 pi w delta_v r^2 / c. Optional breathing term: radial surface
    velocity beta p drives a radial flow with loss 8 pi eta r |beta p|^2, i.e.
    16 pi eta r beta^2 rho c. Thermal conduction is neglected.
    """
    _check_kr(r, 2 * math.pi * f / fluid.sound_speed)
    delta_v, _ = boundary_layer_lengths(f, fluid)
    w = 2 * math.pi * f
    shear = 3 * math.pi * w * delta_v * r * r / fluid.sound_speed
    breathing = 16 * math.pi * fluid.dynamic_viscosity * r * beta * beta * fluid.density * fluid.sound_speed
    return shear + breathing


def absorption_cross_section(
    robot: RobotDesign,
    p: float,
    f: float,
    medium: FluidMedium | TissueMedium,
    fluid: FluidMedium | None = None,
    locked: bool = False,
) -> float:
    """Power removed by all pistons (load plus internal drag) per unit incident flux."""
    if p <= 0:
        raise ValueError(f"pressure must be > 0, got {p!r}")
    if locked or robot.radius == 0:
        return 0.0
    k_f = internal_drag(robot, fluid or FluidMedium())
    p_total = piston_power(p, f, robot.piston, k_f)[1]
    return robot.duty_cycle * robot.num_pistons * p_total / flux_from_pressure(p, medium)


def cross_section_breakdown(
    robot: RobotDesign,
    p: float,
    f: float,
    fluid: FluidMedium,
    medium: FluidMedium | TissueMedium,
    locked: bool = False,
    fixed_center: bool = False,
) -> CrossSectionBreakdown:
    r = robot.radius
    if r == 0:
        return CrossSectionBreakdown(0.0, 0.0, 0.0, 0.0, 0.0)
    k = 2 * math.pi * f / medium.sound_speed
    response = surface_response(robot, operating_k_total(robot, p, f, fluid), medium, locked)
    absorption = absorption_cross_section(robot, p, f, medium, fluid, locked)
    scattering = scattering_cross_section(r, k, response.beta_c_rho, fixed_center)
    dissipation = dissipation_cross_section(r, f, fluid, response.beta)
    return CrossSectionBreakdown(
        absorption, scattering, dissipation, absorption + scattering + dissipation, math.pi * r * r
    )
