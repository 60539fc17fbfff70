import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from acouswarm.scenario import LUNG, SOFT_TISSUE, FluidMedium, SourceSpec, TissuePath, lung_path, soft_tissue_path
from acouswarm.tissue import (
    attenuate,
    derived_source_pressure,
    flux_from_pressure,
    path_pressure,
    pressure_from_intensity,
    source_intensity_for_pressure,
)

WATER = FluidMedium()


@pytest.mark.parametrize("intensity, p", [(1000.0, 54772.2557505), (0.0, 0.0), (900.0, 51961.5242271)])
def test_pressure_from_intensity(intensity, p):
    assert pressure_from_intensity(intensity, WATER) == pytest.approx(p, rel=1e-10)


@pytest.mark.parametrize("p, flux", [(54772.2557505, 1000.0), (0.0, 0.0), (50e3, 833.333333333)])
def test_flux_from_pressure(p, flux):
    assert flux_from_pressure(p, WATER) == pytest.approx(flux, rel=1e-10)


def test_negative_inputs():
    with pytest.raises(ValueError):
        pressure_from_intensity(-1.0, WATER)
    with pytest.raises(ValueError):
        flux_from_pressure(-1.0, WATER)
    with pytest.raises(ValueError):
        attenuate(1.0, SOFT_TISSUE, 1e5, -0.1)


@given(st.floats(min_value=0, max_value=1e7))
def test_flux_pressure_inverse(intensity):
    back = flux_from_pressure(pressure_from_intensity(intensity, WATER), WATER)
    assert back == pytest.approx(intensity, rel=1e-12, abs=1e-300)


def test_amplitude_loss_reading():
    assert derived_source_pressure(1000.0, 0.1, WATER) == pytest.approx(0.9 * 54772.2557505, rel=1e-10)
    assert source_intensity_for_pressure(derived_source_pressure(640.0, 0.1, WATER), 0.1, WATER) == pytest.approx(640)


@pytest.mark.parametrize(
    "p0, medium, f, x, expected",
    [(50e3, SOFT_TISSUE, 500e3, 0.20, 21.80e3), (50e3, LUNG, 40e3, 0.02, 34.34e3), (123.0, LUNG, 1e6, 0.0, 123.0)],
)
def test_attenuate(p0, medium, f, x, expected):
    assert attenuate(p0, medium, f, x) == pytest.approx(expected, rel=2e-3)


@given(
    p=st.floats(min_value=1, max_value=1e6),
    f=st.floats(min_value=2e4, max_value=1e6),
    x1=st.floats(min_value=0, max_value=0.2),
    x2=st.floats(min_value=0, max_value=0.2),
)
def test_attenuate_composition(p, f, x1, x2):
    two = attenuate(attenuate(p, LUNG, f, x1), LUNG, f, x2)
    assert two == pytest.approx(attenuate(p, LUNG, f, x1 + x2), rel=1e-12)


def test_lung_surface():
    expected = 50e3 * math.exp(-8.3e-6 * 4e4 * 0.05) * math.sqrt(0.2)
    assert expected == pytest.approx(22.0e3, rel=3e-3)
    assert path_pressure(SourceSpec(), lung_path(), 40e3, 0.05) == pytest.approx(expected, rel=1e-12)
    # just above the interface no transmission loss applies yet
    assert path_pressure(SourceSpec(), lung_path(), 40e3, 0.05 - 1e-9) > 2 * expected


def test_skin_pressure_is_source():
    assert path_pressure(SourceSpec(), soft_tissue_path(), 100e3, 0.0) == 50e3


def test_unit_transmission_matches_attenuate():
    path = TissuePath(((SOFT_TISSUE, 0.05), (SOFT_TISSUE, 0.15)), (1.0,))
    for x in (0.0, 0.05, 0.12, 0.2):
        assert path_pressure(50e3, path, 3e5, x) == pytest.approx(attenuate(50e3, SOFT_TISSUE, 3e5, x), rel=1e-12)


def test_depth_outside_path():
    with pytest.raises(ValueError):
        path_pressure(SourceSpec(), lung_path(), 1e5, 0.16)


@given(
    f1=st.floats(min_value=2e4, max_value=1e6),
    f2=st.floats(min_value=2e4, max_value=1e6),
    x1=st.floats(min_value=0, max_value=0.15),
    x2=st.floats(min_value=0, max_value=0.15),
)
def test_monotone_in_depth_and_frequency(f1, f2, x1, x2):
    path = lung_path()
    lo, hi = sorted((f1, f2))
    a, b = sorted((x1, x2))
    assert path_pressure(50e3, path, lo, b) <= path_pressure(50e3, path, lo, a)
    assert path_pressure(50e3, path, lo, b) >= path_pressure(50e3, path, hi, b)
