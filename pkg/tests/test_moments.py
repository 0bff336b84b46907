import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import erfc

import msumma as ms
from msumma import MomentFunction, kernel_pair_for, mittag_leffler


def test_gamma_1_values():
    m = ms.GAMMA_1
    for j in range(10):
        assert abs(m(j) - math.factorial(j)) / math.factorial(j) < 1e-14


def test_gamma_half_values():
    m = MomentFunction.gamma(Fraction(1, 2))
    for u in (0.0, 1.0, 2.0, 7.5):
        assert abs(m(u) - math.gamma(1 + 0.5 * u)) < 1e-12 * m(u)


def test_negative_order_is_reciprocal():
    m = MomentFunction.gamma(-1)
    for u in (0.0, 0.5, 2.3):
        assert abs(m(u) - 1.0 / math.gamma(1 + u)) < 1e-14


def test_order_is_exact_rational():
    m = MomentFunction.gamma(Fraction(1, 2)) * MomentFunction.gamma(2)
    assert m.order() == Fraction(5, 2)
    d = m / MomentFunction.gamma(1)
    assert d.order() == Fraction(3, 2)


def test_product_and_quotient_eval():
    m = MomentFunction.gamma(1) * MomentFunction.gamma(Fraction(1, 2))
    for u in (0.0, 1.0, 3.0):
        expect = math.gamma(1 + u) * math.gamma(1 + 0.5 * u)
        assert abs(m(u) - expect) < 1e-12 * expect
    q = MomentFunction.gamma(1) / MomentFunction.gamma(1)
    assert q.order() == 0
    assert abs(q(4.0) - 1.0) < 1e-14


def test_log_eval_no_overflow():
    m = MomentFunction.gamma(2)
    v = m.eval_scaled(300.0)
    assert v.is_finite()
    assert abs(v.log10_abs() - math.lgamma(601) * math.log10(math.e)) < 1e-8


def test_ratio_scaled_cancellation():
    m = MomentFunction.gamma(1)
    r = m.ratio_scaled(101.0, 100.0)
    assert abs(r.to_complex() - 101.0) < 1e-10


def test_negative_argument_rejected():
    with pytest.raises(ValueError):
        ms.GAMMA_1.log_eval(-1.0)


def test_generalized_single_factor_constraints():
    MomentFunction.gamma(1, a=2.0, b=1.5)
    with pytest.raises(ms.UnsupportedKernelError):
        MomentFunction.gamma(1, a=2.0) * MomentFunction.gamma(1)
    with pytest.raises(ValueError):
        MomentFunction.gamma(1, b=0.5)


def test_mittag_leffler_exp():
    for z in (0.3, -2.0, 1 + 1j):
        assert abs(mittag_leffler(1.0, z) - cmath.exp(z)) < 1e-13 * max(
            1.0, abs(cmath.exp(z)))


def test_mittag_leffler_cosh():
    # E_2(z) = cosh(sqrt(z))
    for z in (0.5, 4.0, 2 - 1j):
        ref = cmath.cosh(cmath.sqrt(z))
        assert abs(mittag_leffler(2.0, z) - ref) < 1e-12 * max(1.0, abs(ref))


def test_mittag_leffler_half():
    # E_{1/2}(z) = exp(z^2) erfc(-z) for real z
    for z in (0.2, 1.5, -0.7):
        ref = math.exp(z * z) * erfc(-z)
        assert abs(mittag_leffler(0.5, z) - ref) < 1e-10 * max(1.0, abs(ref))


def test_mittag_leffler_asymptotic_regime():
    # large argument inside the sector switches to the exponential form
    z = 2000.0
    ref = cmath.cosh(cmath.sqrt(z))
    assert abs(mittag_leffler(2.0, z) - ref) < 1e-8 * abs(ref)
    with pytest.raises(ms.UnsupportedRangeError):
        mittag_leffler(0.5, -1e9)


def test_mittag_leffler_alpha_range():
    with pytest.raises(ms.UnsupportedRangeError):
        mittag_leffler(2.5, 1.0)


def test_kernel_pair_mellin_identity():
    # m(u) = int_0^inf x^(u-1) e_m(x) dx for the kernel attached to m
    for s in (1, Fraction(1, 2), 2):
        m = MomentFunction.gamma(s)
        kp = kernel_pair_for(m)
        for u in (0.0, 1.0, 2.5):
            val, _ = quad(lambda x: x ** (u - 1) * kp.em(x).real, 0, np.inf,
                          limit=400)
            assert abs(val - m(u)) < 1e-8 * max(1.0, m(u))


def test_kernel_root_lift():
    # order 2 moment (k = 1/2) needs the minimal lift p with p*k > 1/2
    kp = kernel_pair_for(MomentFunction.gamma(2))
    assert kp.k == 0.5
    assert kp.p == 2
    assert kernel_pair_for(ms.GAMMA_1).p == 1
    assert kernel_pair_for(MomentFunction.gamma(3)).p == 2


def test_kernel_flatness_sector():
    kp = kernel_pair_for(ms.GAMMA_1)
    assert abs(kp.flatness_sector() - math.pi / 2) < 1e-15


def test_kernel_entire_partner_matches_series():
    kp = kernel_pair_for(ms.GAMMA_1)
    z = 0.7 - 0.2j
    ref = sum(z ** n / math.factorial(n) for n in range(60))
    assert abs(kp.Em(z) - ref) < 1e-13


def test_kernel_pair_rejects_composites():
    with pytest.raises(ms.UnsupportedKernelError):
        kernel_pair_for(ms.GAMMA_1 * ms.GAMMA_1)
    with pytest.raises(ms.UnsupportedKernelError):
        kernel_pair_for(ms.GAMMA_0)
