import math

import numpy as np
import pytest

import msumma as ms
from msumma import RamifiedSeries
from msumma.pade import (diagonal_pade, geometric_slope, ratio_radius,
                         stable_poles)


def test_geometric_pole_located():
    # 1/(1 - 4x): single pole at 0.25
    a = [4.0**j for j in range(40)]
    poles = stable_poles(a)
    assert poles
    loc, rad = poles[0]
    assert abs(loc - 0.25) < 1e-3


def test_two_pole_function():
    # 1/((1-x)(1+2x)) = sum c_j x^j
    c = np.zeros(40)
    for j in range(40):
        c[j] = (1.0 - (-2.0) ** (j + 1)) / 3.0
    poles = stable_poles(c)
    locs = sorted((p for p, _ in poles), key=abs)
    assert abs(locs[0] + 0.5) < 1e-6
    assert abs(locs[1] - 1.0) < 1e-6


def test_sqrt_branch_point_modulus():
    # 1/sqrt(1 - 4x): branch point at 0.25 shows up as the nearest pole of
    # a pole string along the cut
    c = [math.comb(2 * j, j) for j in range(40)]
    poles = stable_poles(c)
    assert poles
    assert abs(poles[0][0] - 0.25) < 1e-3
    # cut direction: the string continues on the positive real axis
    if len(poles) > 1:
        assert poles[1][0].real > 0.25
        assert abs(poles[1][0].imag) < 0.05


def test_rescaling_extreme_radius():
    # radius 1e-8: raw Pade would be hopeless without coefficient rescaling
    r = 1e-8
    a = [(1.0 / r) ** j for j in range(30)]
    poles = stable_poles(a)
    assert poles
    assert abs(poles[0][0] - r) < 1e-3 * r


def test_rotation_equivariance():
    # rotating the series variable rotates every pole the same way
    c = np.array([3.0**j for j in range(36)], dtype=complex)
    phase = np.exp(1j * 0.7)
    rotated = c * phase ** np.arange(36)
    p0 = stable_poles(c)[0][0]
    p1 = stable_poles(rotated)[0][0]
    assert abs(p1 - p0 / phase) < 1e-6 * abs(p0)


def test_ratio_radius():
    a = [2.0**j for j in range(30)]
    assert abs(ratio_radius(a) - 0.5) < 1e-12
    assert ratio_radius(np.ones(3)) == 1.0
    assert abs(ratio_radius([10.0**-j for j in range(20)]) - 10.0) < 1e-9


def test_diagonal_pade_evaluation():
    c = [1.0 / math.factorial(j) for j in range(12)]
    ap = diagonal_pade(c, 4, 4)
    for x in (0.3, -0.5):
        assert abs(ap(x) - math.exp(x)) < 1e-9
    # [4/4] truncation error of exp at 1 is ~1e-7; only check that scale
    assert abs(ap(1.0) - math.e) < 1e-6


def test_diagonal_pade_needs_enough_coefficients():
    with pytest.raises(ValueError):
        diagonal_pade([1.0, 2.0], 4)
    with pytest.raises(ValueError):
        stable_poles(np.ones(5))


def test_exactly_rational_input_degrades_order():
    # geometric coefficients make the high-order system exactly singular;
    # the solver must fall back to a smaller order, not crash
    a = np.ones(40)
    poles = stable_poles(a)
    assert poles
    assert abs(poles[0][0] - 1.0) < 1e-6


def test_geometric_slope_median():
    logs = np.arange(20) * 0.5
    assert abs(geometric_slope(logs) - 0.5) < 1e-14
    assert geometric_slope(np.array([1.0])) == 0.0
