import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.special import exp1

import msumma as ms
from msumma import (BiSeries, GAMMA_1, MomentFunction, RamifiedSeries,
                    beta_bridge, kernel_pair_for, kernel_solution_quadrature,
                    laplace_resum)
from msumma.resummation import joint_borel_factors

K1 = kernel_pair_for(GAMMA_1)


def euler_borel(n=40):
    # Borel transform of sum (-1)^j j! t^j is sum (-t)^j = 1/(1+t)
    return RamifiedSeries.from_complex(1, (-1.0) ** np.arange(n))


def test_euler_series_oracle():
    # sum_0^inf (-1)^j j! t^j = e^{1/t} E_1(1/t) / t for t > 0
    for t in (0.05, 0.1, 0.2):
        res = laplace_resum(euler_borel(), K1, 0.0, t)
        exact = math.exp(1.0 / t) * exp1(1.0 / t) / t
        assert abs(res.value - exact) < 1e-8 * abs(exact)
        assert res.quadrature_error < 1e-8


def test_euler_series_complex_point():
    t = 0.1 * cmath.exp(0.3j)
    res = laplace_resum(euler_borel(), K1, 0.0, t)
    # analytic continuation of the real-axis oracle
    exact = cmath.exp(1.0 / t) * exp1(complex(1.0 / t)) / t
    assert abs(res.value - exact) < 1e-7 * abs(exact)


def test_sector_violation():
    with pytest.raises(ms.SectorError):
        laplace_resum(euler_borel(), K1, 0.0, 0.1j * cmath.exp(0.2j))


def test_blocked_ray():
    # Borel function 1/(1-x): pole sits on the d = 0 ray
    a = RamifiedSeries.from_complex(1, np.ones(40))
    with pytest.raises(ms.RayBlockedError):
        laplace_resum(a, K1, 0.0, 0.1)
    # rotating away from the pole succeeds
    res = laplace_resum(a, K1, math.pi / 2, 0.1j)
    assert np.isfinite(res.value)


def test_ramified_series_rejected():
    a = RamifiedSeries.from_complex(2, np.ones(20))
    with pytest.raises(ms.GridError):
        laplace_resum(a, K1, 0.0, 0.1)


def test_geometric_resum_is_exact_sum():
    # convergent case: resummation must agree with the plain sum
    # sum (t/2)^j = 1/(1 - t/2); Borel series sum (x/2)^j / j!
    a = RamifiedSeries.from_complex(
        1, [0.5**j / math.factorial(j) for j in range(30)])
    t = 0.3
    res = laplace_resum(a, K1, 0.0, t)
    assert abs(res.value - 1.0 / (1.0 - t / 2.0)) < 1e-10


# -- iterated-to-joint Borel bridge -----------------------------------------

def test_beta_bridge_closed_form():
    # start from v_{kn} = 1 / (Gamma(1+k s1) Gamma(1+n s2)); bridging must
    # produce exactly 1 / Gamma(1 + k s1 + n s2)
    s1, s2 = Fraction(1), Fraction(1, 2)
    kmax = nmax = 60
    g = np.empty((kmax + 1, nmax + 1), dtype=np.complex128)
    e = np.zeros_like(g, dtype=np.int64)
    lge = math.log10(math.e)
    from msumma.scaled import ScaledComplex
    for k in range(kmax + 1):
        for n in range(nmax + 1):
            sc = ScaledComplex.from_log10(
                -(math.lgamma(1.0 + k) + math.lgamma(1.0 + 0.5 * n)) * lge)
            g[k, n], e[k, n] = sc.mantissa, sc.exp10
    v = BiSeries(1, 1, g, e, normalized=True)
    w = beta_bridge(v, s1, s2)
    worst = 0.0
    for k in range(kmax + 1):
        for n in range(nmax + 1):
            expect = 1.0 / joint_borel_factors(k, n, s1, s2)
            got = w.coeff(k, n).to_complex().real
            worst = max(worst, abs(got - expect) / expect)
    assert worst < 1e-13


def test_beta_bridge_trivial_orders():
    rng = np.random.default_rng(0)
    v = BiSeries.from_complex(1, 1, rng.normal(size=(6, 6)))
    w = beta_bridge(v, 0, 0)
    for k in range(6):
        for n in range(6):
            assert abs(w.coeff(k, n).to_complex()
                       - v.coeff(k, n).to_complex()) < 1e-15


def test_joint_borel_factors_values():
    assert abs(joint_borel_factors(2, 3, 1, 1) - math.factorial(5)) < 1e-9
    assert joint_borel_factors(0, 0, 1, 2) == 1.0


# -- contour-integral solution oracle ---------------------------------------

def test_kernel_quadrature_transport():
    # (d_t - zeta) v = 0 with phi = 1/(1-z): v(t,z) = 1/(1-z-t)
    phi = RamifiedSeries.from_complex(1, np.ones(60))
    val = kernel_solution_quadrature(1.0, 1, GAMMA_1, GAMMA_1, phi,
                                     0.05, 0.05)
    assert abs(val - 1.0 / 0.9) < 1e-6


def test_kernel_quadrature_scaled_root():
    # lam = 2: v(t,z) = 1/(1 - z - 2t)
    phi = RamifiedSeries.from_complex(1, np.ones(60))
    val = kernel_solution_quadrature(2.0, 1, GAMMA_1, GAMMA_1, phi,
                                     0.03, 0.05)
    assert abs(val - 1.0 / (1.0 - 0.05 - 0.06)) < 1e-6


def test_kernel_quadrature_higher_order():
    # (d_{Gamma_2,t} - zeta^2) v = 0 needs s1 = 2 s2
    phi = RamifiedSeries.from_complex(1, np.ones(60))
    m1 = MomentFunction.gamma(2)
    t, z = 0.02, 0.05
    # row recurrence v_j = phi^(2j) / Gamma(1+2j) with phi = 1/(1-z) sums
    # to the closed form (1-z) / ((1-z)^2 - t)
    exact = (1.0 - z) / ((1.0 - z) ** 2 - t)
    val = kernel_solution_quadrature(1.0, 2, m1, GAMMA_1, phi, t, z)
    assert abs(val - exact) < 1e-6 * abs(exact)


def test_kernel_quadrature_guards():
    phi = RamifiedSeries.from_complex(1, np.ones(40))
    with pytest.raises(ms.GridError):
        kernel_solution_quadrature(1.0, 0, GAMMA_1, GAMMA_1, phi, 0.01, 0.01)
    with pytest.raises(ms.UnsupportedRangeError):
        kernel_solution_quadrature(1.0, 2, GAMMA_1, GAMMA_1, phi, 0.01, 0.01)
    with pytest.raises(ms.SectorError):
        kernel_solution_quadrature(1.0, 1, GAMMA_1, GAMMA_1, phi, 0.9, 0.9)
    with pytest.raises(ms.GridError):
        kernel_solution_quadrature(
            1.0, 1, GAMMA_1, GAMMA_1,
            RamifiedSeries.from_complex(2, np.ones(40)), 0.01, 0.01)
