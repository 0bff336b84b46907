import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from msumma import ScaledComplex

finite = st.complex_numbers(min_magnitude=1e-6, max_magnitude=1e6,
                            allow_nan=False, allow_infinity=False)


def close(a: ScaledComplex, z: complex, tol=1e-12):
    ref = ScaledComplex.from_complex(z)
    if not z:
        return abs(a.to_complex()) <= tol
    d = (a - ref).log10_abs() - ref.log10_abs()
    return d <= math.log10(tol) + 1


def test_roundtrip():
    for z in (1.0, -2.5 + 3j, 1e-200j, 7e150):
        assert ScaledComplex.from_complex(z).to_complex() == z


def test_huge_range_product():
    a = ScaledComplex.from_log10(5000.0)
    b = ScaledComplex.from_log10(-4990.0)
    p = a * b
    assert abs(p.to_complex() - 1e10) < 1e-3


def test_zero_identity():
    z = ScaledComplex.zero()
    a = ScaledComplex.from_complex(3 - 4j)
    assert not z
    assert (a + z).to_complex() == a.to_complex()
    assert (a * z).to_complex() == 0


def test_log10_abs():
    a = ScaledComplex.from_complex(3 + 4j)
    assert abs(a.log10_abs() - math.log10(5)) < 1e-14
    assert ScaledComplex.zero().log10_abs() == -math.inf


def test_phase_and_conjugate():
    a = ScaledComplex.from_complex(1 + 1j)
    assert abs(a.phase() - math.pi / 4) < 1e-14
    assert abs(a.conjugate().to_complex() - (1 - 1j)) < 1e-15


@given(finite, finite)
@settings(max_examples=200, deadline=None)
def test_field_ops_match_complex(x, y):
    a, b = ScaledComplex.from_complex(x), ScaledComplex.from_complex(y)
    assert close(a + b, x + y)
    assert close(a - b, x - y)
    assert close(a * b, x * y)
    assert close(a / b, x / y)


@given(finite)
@settings(max_examples=100, deadline=None)
def test_scaling_invariance(x):
    # exponent bookkeeping must not depend on the entry magnitude
    a = ScaledComplex.from_complex(x)
    big = ScaledComplex.from_log10(300.0)
    out = (a * big) / big
    assert close(out, x)


def test_from_log10_phase():
    a = ScaledComplex.from_log10(10.0, phase=math.pi / 2)
    z = a.to_complex()
    assert abs(abs(z) - 1e10) / 1e10 < 1e-12
    assert abs(np.angle(z) - math.pi / 2) < 1e-12
