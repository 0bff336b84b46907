"""Coefficient-level moment Borel transforms and moment derivatives.

All operators act exactly on the scaled coefficients:

* Borel transform:          c_j -> c_j / m(j/kappa)
* inverse Borel transform:  c_j -> c_j * m(j/kappa)
* moment derivative:        c_j -> c_{j+kappa} * m(j/kappa + 1) / m(j/kappa)
* monomial pseudo-operator  lam * zeta^q (q*kappa integral):
                            c_j -> lam * c_{j+q*kappa} * m(j/kappa + q) / m(j/kappa)

The derivative uses the explicit ratio form rather than conjugation by
Borel transforms; the conjugation identity is exercised by tests instead.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import _kernels as K
from .errors import GridError, TruncationError
from .moments import LOG10_E, MomentFunction
from .scaled import ScaledComplex
from .series import RamifiedSeries


def _factor_series(m: MomentFunction, kappa: int, count: int, sign: float,
                   offset: Fraction = Fraction(0)):
    """Scaled array of m(j/kappa + offset)^sign for j = 0..count-1."""
    mant = np.empty(count, dtype=np.complex128)
    exp = np.empty(count, dtype=np.int64)
    off = float(offset)
    for j in range(count):
        sc = ScaledComplex.from_log10(sign * m.log_eval(j / kappa + off) * LOG10_E)
        mant[j] = sc.mantissa
        exp[j] = sc.exp10
    return mant, exp


def borel(m: MomentFunction, a: RamifiedSeries) -> RamifiedSeries:
    fm, fe = _factor_series(m, a.kappa, len(a), -1.0)
    rm, re = K.mul(a.mant, a.exp10, fm, fe)
    return RamifiedSeries(a.kappa, rm, re, normalized=True)


def inverse_borel(m: MomentFunction, a: RamifiedSeries) -> RamifiedSeries:
    fm, fe = _factor_series(m, a.kappa, len(a), +1.0)
    rm, re = K.mul(a.mant, a.exp10, fm, fe)
    return RamifiedSeries(a.kappa, rm, re, normalized=True)


def borel_bi(m_t: MomentFunction, m_z: MomentFunction, u) -> "BiSeries":
    """Apply the t-Borel and z-Borel transforms to a BiSeries."""
    from .series import BiSeries

    rows = [borel(m_z, u.extract_row(j)) for j in range(u.trunc_t + 1)]
    v = BiSeries.from_rows(u.kappa_t, rows)
    cols = [borel(m_t, v.extract_col(n)) for n in range(v.trunc_z + 1)]
    mant = np.stack([c.mant for c in cols], axis=1)
    exp = np.stack([c.exp10 for c in cols], axis=1)
    return BiSeries(u.kappa_t, u.kappa_z, mant, exp, normalized=True)


def moment_derivative(m: MomentFunction, power: int, a: RamifiedSeries
                      ) -> RamifiedSeries:
    """power-fold m-moment derivative; truncation drops by kappa per step."""
    if power < 0:
        raise ValueError("power must be nonnegative")
    out = a
    for _ in range(power):
        if out.trunc < out.kappa:
            raise TruncationError(
                f"truncation {out.trunc} exhausted by derivative step "
                f"(needs at least kappa={out.kappa} more coefficients)")
        n = len(out) - out.kappa
        ratio_m = np.empty(n, dtype=np.complex128)
        ratio_e = np.empty(n, dtype=np.int64)
        for j in range(n):
            sc = m.ratio_scaled(j / out.kappa + 1.0, j / out.kappa)
            ratio_m[j] = sc.mantissa
            ratio_e[j] = sc.exp10
        rm, re = K.mul(out.mant[out.kappa:], out.exp10[out.kappa:],
                       ratio_m, ratio_e)
        out = RamifiedSeries(out.kappa, rm, re, normalized=True)
    return out


def monomial_pseudo(lam: complex, q, m: MomentFunction, a: RamifiedSeries,
                    power: int = 1) -> RamifiedSeries:
    """(lam * zeta^q)(d_{m,z}) applied `power` times, via the eigenvalue rule.

    The iterated ratio telescopes, so the power is applied in closed form:
    result_j = lam^p * a_{j+p*q*kappa} * m(j/kappa + p*q)/m(j/kappa).
    """
    q = Fraction(q)
    if q < 0:
        raise GridError("negative pole orders are not on the coefficient grid")
    shift_f = q * a.kappa * power
    if shift_f.denominator != 1:
        raise GridError(
            f"q={q} does not land on the 1/{a.kappa} grid (q*kappa not integral)")
    shift = int(shift_f)
    if shift > a.trunc:
        raise TruncationError(
            f"shift {shift} exceeds truncation {a.trunc}")
    n = len(a) - shift
    lam_p = ScaledComplex.from_complex(1.0)
    lam_sc = ScaledComplex.from_complex(lam)
    for _ in range(power):
        lam_p = lam_p * lam_sc
    fm = np.empty(n, dtype=np.complex128)
    fe = np.empty(n, dtype=np.int64)
    for j in range(n):
        sc = m.ratio_scaled(j / a.kappa + float(q) * power, j / a.kappa)
        sc = sc * lam_p
        fm[j] = sc.mantissa
        fe[j] = sc.exp10
    rm, re = K.mul(a.mant[shift:], a.exp10[shift:], fm, fe)
    return RamifiedSeries(a.kappa, rm, re, normalized=True)


def apply_char_polynomial(coeffs, m1: MomentFunction, m2: MomentFunction,
                          u) -> "BiSeries":
    """Apply sum p_ab d_{m1,t}^a d_{m2,z}^b to a BiSeries (residual checks).

    `coeffs` maps (a, b) -> complex.  Output truncations shrink by the
    largest exponents present.
    """
    from .series import BiSeries

    max_a = max(a for a, _ in coeffs)
    max_b = max(b for _, b in coeffs)
    nt = u.trunc_t + 1 - max_a * u.kappa_t
    nz = u.trunc_z + 1 - max_b * u.kappa_z
    if nt <= 0 or nz <= 0:
        raise TruncationError("series too short for the requested operator")
    acc_m = np.zeros((nt, nz), dtype=np.complex128)
    acc_e = np.zeros((nt, nz), dtype=np.int64)
    for (pa, pb), c in coeffs.items():
        if c == 0:
            continue
        term_rows = []
        for j in range(nt):
            row = u.extract_row(j + pa * u.kappa_t)
            # d_{m1,t}^a contributes m1(j/kt + a)/m1(j/kt) on row j
            f = m1.ratio_scaled(j / u.kappa_t + pa, j / u.kappa_t)
            row = moment_derivative(m2, pb, row) if pb else row
            term_rows.append(row.truncate_to(nz - 1).scale(f * c))
        for j in range(nt):
            rm, re = K.add(acc_m[j], acc_e[j],
                           term_rows[j].mant, term_rows[j].exp10)
            acc_m[j], acc_e[j] = rm, re
    return BiSeries(u.kappa_t, u.kappa_z, acc_m, acc_e, normalized=True)


def max_relative_deviation(a: RamifiedSeries, b: RamifiedSeries) -> float:
    """max_j |a_j - b_j| / max_j max(|a_j|, |b_j|) over the common range."""
    n = min(len(a), len(b))
    num = -math.inf
    den = -math.inf
    for j in range(n):
        d = (a[j] - b[j]).log10_abs()
        s = max(a[j].log10_abs(), b[j].log10_abs())
        num = max(num, d)
        den = max(den, s)
    if den == -math.inf:
        return 0.0
    if num == -math.inf:
        return 0.0
    return 10.0 ** (num - den)


def check_commutation(m: MomentFunction, m_prime: MomentFunction,
                      a: RamifiedSeries) -> float:
    """Deviation of B_{m'} d_m a from d_{mm'} B_{m'} a (0 when exact)."""
    lhs = borel(m_prime, moment_derivative(m, 1, a))
    rhs = moment_derivative(m * m_prime, 1, borel(m_prime, a))
    return max_relative_deviation(lhs, rhs)


def check_commutation_poly(poly, m: MomentFunction, m_prime: MomentFunction,
                           a: RamifiedSeries) -> float:
    """Same check for P(d_m) with constant coefficients poly[k] * lambda^k."""
    def apply_poly(mm: MomentFunction, x: RamifiedSeries) -> RamifiedSeries:
        deg = len(poly) - 1
        out = RamifiedSeries.zero(x.kappa, x.trunc - deg * x.kappa)
        for k, c in enumerate(poly):
            if c == 0:
                continue
            term = moment_derivative(mm, k, x)
            out = out + term.scale(c)
        return out

    lhs = borel(m_prime, apply_poly(m, a))
    rhs = apply_poly(m * m_prime, borel(m_prime, a))
    return max_relative_deviation(lhs, rhs)
