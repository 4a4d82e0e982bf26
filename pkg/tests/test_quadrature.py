"""Adaptive quadrature and circle means."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zerocert import integrate, mean_on_circle, ToleranceFailure

import oracles


def test_integrate_smooth():
    val, err = integrate(np.sin, 0.0, np.pi)
    assert abs(val - 2.0) <= max(err, 1e-12)


def test_integrate_polynomial_exact():
    # Gauss-Legendre 16 is exact through degree 31
    val, err = integrate(lambda x: 7 * x**6 - 3 * x**2 + 1, -1.0, 2.0)
    exact = (2.0**7 - (-1.0) ** 7) - (2.0**3 - (-1.0) ** 3) + 3.0
    assert abs(val - exact) <= 1e-12


def test_integrate_log_singularity_isolated():
    # int_0^1 ln x dx = -1
    val, err = integrate(np.log, 0.0, 1.0, singularities=(0.0,))
    assert abs(val + 1.0) <= 1e-8
    assert err <= 1e-8


def test_integrate_interior_singularity():
    # int_{-1}^{1} ln|x| dx = -2
    val, err = integrate(lambda x: np.log(np.abs(x)), -1.0, 1.0, singularities=(0.0,))
    assert abs(val + 2.0) <= 1e-8


def test_integrate_tolerance_failure():
    f = lambda x: np.log(np.abs(x))
    with pytest.raises(ToleranceFailure):
        # two panels cannot resolve the singular end at this tolerance
        integrate(f, 0.0, 1.0, tol=1e-12, max_panels=2)


@settings(max_examples=40, deadline=None)
@given(
    c=st.floats(-3, 3),
    r=st.floats(0.1, 4.0),
)
def test_mean_on_circle_harmonic(c, r):
    # circle averages reproduce harmonic functions at the center
    val, err = mean_on_circle(lambda z: np.real(z) ** 2 - np.imag(z) ** 2, c + 0j, r)
    assert abs(val - c * c) <= max(10 * err, 1e-9)


def test_mean_on_circle_constant_and_point():
    val, _ = mean_on_circle(lambda z: np.full_like(np.real(z), 5.0), 1j, 2.0)
    assert abs(val - 5.0) <= 1e-12
    val, _ = mean_on_circle(lambda z: np.abs(z) ** 2, 3.0 + 0j, 0.0)
    assert val == 9.0


def test_mean_on_circle_singular_on_circle():
    # classical: the mean of ln|z - 1| over the unit circle is zero
    val, err = mean_on_circle(
        lambda z: np.log(np.abs(z - 1.0)), 0j, 1.0, singular_points=(1.0 + 0j,)
    )
    assert abs(val) <= 1e-7


def test_mean_on_circle_matches_riemann_oracle():
    u = lambda z: np.exp(np.real(z)) * np.cos(np.imag(z)) + np.abs(z)
    val, err = mean_on_circle(u, 0.5 + 0.5j, 1.5)
    ref = oracles.circle_mean_riemann(u, 0.5 + 0.5j, 1.5)
    assert abs(val - ref) <= 1e-8
