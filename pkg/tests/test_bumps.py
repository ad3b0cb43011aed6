import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from strichartz import bumps


def test_smooth_step_limits_and_symmetry():
    y = np.linspace(-1, 2, 301)
    s = bumps.smooth_step(y)
    assert np.all(s[y <= 0] == 0) and np.all(s[y >= 1] == 1)
    np.testing.assert_allclose(bumps.smooth_step(1 - y), 1 - s, atol=1e-15)
    assert np.all(np.diff(s) >= 0)


def test_step_derivative_against_finite_difference():
    y = np.linspace(0.05, 0.95, 37)
    h = 1e-6
    fd = (bumps.smooth_step(y + h) - bumps.smooth_step(y - h)) / (2 * h)
    np.testing.assert_allclose(bumps.smooth_step_derivative(y), fd, rtol=1e-6, atol=1e-9)


def test_bump_is_unit_mass_and_symmetric():
    mass, _ = integrate.quad(bumps.bump, -1, 1, epsabs=1e-14)
    assert mass == pytest.approx(1.0, abs=1e-12)
    x = np.linspace(-1.5, 1.5, 61)
    np.testing.assert_allclose(bumps.bump(x), bumps.bump(-x), atol=1e-15)
    assert np.all(bumps.bump(x[np.abs(x) >= 1]) == 0)


@given(st.floats(-3, 3), st.floats(0.01, 0.2))
def test_mollified_indicator_is_convolution(x, width):
    lo, hi = -0.5, 0.7
    val, _ = integrate.quad(lambda y: bumps.mollifier(np.array([x - y]), width)[0], lo, hi,
                            points=[x - width, x, x + width], epsabs=1e-12, limit=100)
    assert bumps.mollified_indicator(np.array([x]), lo, hi, width)[0] == pytest.approx(val, abs=1e-8)


def test_sharp_indicator_endpoints():
    x = np.array([-1.0, 0.0, 0.5, 1.0, 2.0])
    np.testing.assert_array_equal(bumps.sharp_indicator(x, 0.0, 1.0), [0, bumps.ENDPOINT, 1, bumps.ENDPOINT, 0])
    # lattice sum of the square is the trapezoidal rule: exact length
    h = 0.01
    grid = np.arange(-100, 201) * h
    assert np.sum(bumps.sharp_indicator(grid, 0.0, 1.0) ** 2) * h == pytest.approx(1.0, rel=1e-12)


def test_dyadic_partition():
    rho = np.geomspace(1 / 64, 64, 2001)
    psi = bumps.dyadic_bump(rho)
    assert bumps.dyadic_bump(np.array([1.0]))[0] == pytest.approx(1.0)
    assert np.all(psi[(rho < 0.5) | (rho > 2)] == 0)
    total = sum(bumps.dyadic_bump(rho / 2.0**k) for k in range(-8, 9))
    np.testing.assert_allclose(total, 1.0, atol=1e-14)
