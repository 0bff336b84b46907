import cmath
import math

import numpy as np

from msumma.quadrature import (integrate_circle, integrate_path,
                               integrate_segment)


def test_exponential_on_real_segment():
    res = integrate_segment(np.exp, 0.0, 1.0)
    assert abs(res.value - (math.e - 1.0)) < 1e-13
    assert abs(res.value - (math.e - 1.0)) <= max(res.error, 1e-14)


def test_polynomial_is_near_exact():
    # degree 13 is inside the exactness range of the base rule
    res = integrate_segment(lambda x: 14.0 * x**13, 0.0, 1.0)
    assert abs(res.value - 1.0) < 1e-13


def test_oscillatory_integrand():
    res = integrate_segment(np.sin, 0.0, 20.0 * math.pi)
    assert abs(res.value) < 1e-10


def test_complex_segment_direction():
    # int_0^{i} e^x dx = e^i - 1
    res = integrate_segment(np.exp, 0.0, 1j)
    assert abs(res.value - (cmath.exp(1j) - 1.0)) < 1e-13


def test_path_matches_antiderivative():
    # analytic integrand: only the endpoints matter
    pts = [0.0, 1.0, 1.0 + 1.0j]
    res = integrate_path(lambda x: 3.0 * x**2, pts)
    assert abs(res.value - (1.0 + 1.0j) ** 3) < 1e-12
    assert res.panels >= 2


def test_adaptive_refinement_on_peak():
    res = integrate_segment(lambda x: 1.0 / (1e-4 + x**2), -1.0, 1.0,
                            tol=1e-10)
    exact = 2.0 / 1e-2 * math.atan(1.0 / 1e-2)
    assert abs(res.value - exact) < 1e-8 * exact
    assert res.panels > 1


def test_circle_residue():
    val = integrate_circle(lambda w: 1.0 / w, 0.0, 1.0)
    assert abs(val - 2j * math.pi) < 1e-12


def test_circle_analytic_integrand_vanishes():
    val = integrate_circle(lambda w: w**2 + 3.0, 0.5, 2.0)
    assert abs(val) < 1e-12


def test_circle_shifted_pole():
    val = integrate_circle(lambda w: 1.0 / (w - 0.3j), 0.3j, 0.7)
    assert abs(val - 2j * math.pi) < 1e-12
