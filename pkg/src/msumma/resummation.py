"""Moment Borel-Laplace resummation and kernel-integral cross-checks.

laplace_resum realizes the sum of a divergent series as the Laplace-type
integral of its Borel transform against the kernel e_m along a chosen
direction; the Borel function itself is the diagonal Pade representative
of the truncated Borel series.  beta_bridge converts iterated Borel
transforms into the joint one at the coefficient level, and
kernel_solution_quadrature evaluates the closed contour representation of
simple-equation solutions as an independent oracle.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (GridError, RayBlockedError, SectorError,
                     UnsupportedRangeError)
from .moments import KernelPair, MomentFunction, kernel_pair_for
from .pade import diagonal_pade, ratio_radius, stable_poles
from .quadrature import integrate_segment
from .scaled import ScaledComplex
from .series import BiSeries, RamifiedSeries

SECTOR_MARGIN = 0.02  # rad shaved off the flatness sector pi/(2k)
RAY_ANGLE_TOL = math.radians(2.0)
DECAY_EXPONENT = 40.0  # kernel decay e^{-40} terminates the Laplace path


@dataclass(frozen=True)
class ResummationResult:
    value: complex
    direction: float
    t: complex
    quadrature_error: float
    pade_radius_used: float


def _angular_gap(d1: float, d2: float) -> float:
    g = abs(d1 - d2) % (2.0 * math.pi)
    return min(g, 2.0 * math.pi - g)


def laplace_resum(borel_series: RamifiedSeries, kernel: KernelPair, d: float,
                  t: complex, tol: float = 1e-12) -> ResummationResult:
    """value = int_0^{inf e^{id}} V(x) e_m(x/t) dx/x with V the Pade sum.

    Preconditions: arg t inside the flatness sector of direction d
    (|arg t - d| < pi/(2k) - margin) and no detected Borel singularity on
    the ray within the angular tolerance.
    """
    if borel_series.kappa != 1:
        raise GridError("laplace_resum expects an unramified Borel series")
    t = complex(t)
    k = kernel.k
    half = math.pi / (2.0 * k) - SECTOR_MARGIN
    if _angular_gap(cmath.phase(t), d) >= half:
        raise SectorError(
            f"arg t = {cmath.phase(t):.4f} outside the sector |arg t - d| < "
            f"{half:.4f} around direction d = {d:.4f}")

    poles = stable_poles(borel_series) if len(borel_series) >= 8 else []
    nearest = math.inf
    for loc, rad in poles:
        gap = _angular_gap(cmath.phase(loc), d)
        cone = math.atan2(rad, abs(loc))
        if gap <= RAY_ANGLE_TOL + cone:
            raise RayBlockedError(
                f"direction {d:.4f} blocked by Borel singularity at "
                f"{loc:.6g} (confidence radius {rad:.2g})")
        nearest = min(nearest, abs(loc))

    m = len(borel_series) // 2
    rep = diagonal_pade(borel_series, m)

    a, b = kernel.moment.scale_a, kernel.moment.shift_b

    def em_over_x(x):
        # e_m(x/t)/x with e_m(y) = a k y^{bk} exp(-y^k)
        y = x / t
        return a * k * y ** (b * k) * np.exp(-(y ** k)) / x

    cosf = math.cos(k * _angular_gap(cmath.phase(t), d))
    r_max = abs(t) * (DECAY_EXPONENT / cosf) ** (1.0 / k)

    def f(x):
        return rep(x) * em_over_x(x)

    # split at |t| so the adaptive pass resolves the kernel turnover
    mid = min(abs(t), r_max / 2.0) * cmath.exp(1j * d)
    end = r_max * cmath.exp(1j * d)
    res1 = integrate_segment(f, 0.0, mid, tol)
    res2 = integrate_segment(f, mid, end, tol)
    return ResummationResult(
        value=res1.value + res2.value,
        direction=d, t=t,
        quadrature_error=max(res1.error + res2.error, 1e-300),
        pade_radius_used=nearest if math.isfinite(nearest)
        else ratio_radius(borel_series))


def beta_bridge(v: BiSeries, s1, s2) -> BiSeries:
    """Iterated-to-joint Borel conversion at the coefficient level.

    w_{kn} = v_{kn} * Gamma(1+k s1) Gamma(1+n s2) / Gamma(1+k s1+n s2),
    turning B_{Gamma_{s1},t} B_{Gamma_{s2},z} u into B_{(s1,s2)} u exactly.
    """
    s1, s2 = float(Fraction(s1)), float(Fraction(s2))
    mant = np.array(v.mant)
    exp = np.array(v.exp10)
    lge = math.log10(math.e)
    for kk in range(v.trunc_t + 1):
        u1 = s1 * kk / v.kappa_t
        for n in range(v.trunc_z + 1):
            u2 = s2 * n / v.kappa_z
            lg = (math.lgamma(1.0 + u1) + math.lgamma(1.0 + u2)
                  - math.lgamma(1.0 + u1 + u2))
            sc = ScaledComplex(complex(mant[kk, n]), int(exp[kk, n]))
            sc = sc * ScaledComplex.from_log10(lg * lge)
            mant[kk, n], exp[kk, n] = sc.mantissa, sc.exp10
    return BiSeries(v.kappa_t, v.kappa_z, mant, exp, normalized=True)


def joint_borel_factors(k: int, n: int, s1, s2) -> float:
    """m_{(s1,s2)}(k,n) = Gamma(1 + k s1 + n s2), the joint divisor."""
    return math.exp(math.lgamma(1.0 + float(s1) * k + float(s2) * n))


def kernel_solution_quadrature(lam: complex, q: int, m1: MomentFunction,
                               m2: MomentFunction, phi: RamifiedSeries,
                               t: complex, z: complex, *,
                               eps: float | None = None,
                               circle_samples: int = 96,
                               tol: float = 1e-10) -> complex:
    """Contour-integral value of the solution of (d_{m1,t} - lam zeta^q) v = 0.

    v(t,z) = m1(0)/(2 pi i) * oint_{|w|=eps} phi(w)
             int_0^{inf e^{i theta}} E_{m1}(t lam zeta^q) E_{m2}(zeta z)
             e_{m2}(zeta w) / (zeta w) dzeta dw,
    with theta = -arg w re-picked per outer node so the kernel decays on
    the inner ray.  Restricted to kappa = 1, beta = 1, integer q >= 1 and
    moment orders with s1 = q s2 (the representation's validity regime).
    """
    if phi.kappa != 1:
        raise GridError("kernel_solution_quadrature requires kappa = 1")
    if int(q) != q or q < 1:
        raise GridError("q must be a positive integer here")
    q = int(q)
    if m1.order() != q * m2.order():
        raise UnsupportedRangeError(
            f"need moment orders s1 = q*s2; got s1={m1.order()}, "
            f"s2={m2.order()}, q={q}")
    pair1 = kernel_pair_for(m1)
    pair2 = kernel_pair_for(m2)
    k2 = pair2.k
    a2, b2 = m2.scale_a, m2.shift_b

    radius = ratio_radius(phi)
    if not math.isfinite(radius):
        radius = 1.0
    if eps is None:
        eps = 0.75 * radius
    t, z = complex(t), complex(z)
    if abs(z) >= 0.5 * eps or abs(t) >= 0.5 * eps ** q:
        raise SectorError(
            f"(t, z) = ({t}, {z}) outside the validity polydisc for contour "
            f"radius eps = {eps:.3g}; shrink |t|, |z| or supply data with a "
            f"larger convergence disc")

    rho_max = (1.5 * DECAY_EXPONENT) ** (1.0 / k2) / eps

    def inner(w: complex) -> complex:
        theta = -cmath.phase(w)
        e_th = cmath.exp(1j * theta)

        def g(x):
            vals = np.empty(len(x), dtype=np.complex128)
            for i, zeta in enumerate(x):
                if zeta == 0:
                    zeta = 1e-300 * e_th
                y = zeta * w
                em = a2 * k2 * y ** (b2 * k2) * cmath.exp(-(y ** k2))
                vals[i] = (pair1.Em(t * lam * zeta ** q)
                           * pair2.Em(zeta * z) * em / y)
            return vals

        end = rho_max * e_th
        res = integrate_segment(g, 0.0, end, tol)
        return res.value

    th = 2.0 * math.pi * np.arange(circle_samples) / circle_samples
    total = 0j
    for ang in th:
        w = eps * cmath.exp(1j * ang)
        dw = 1j * w
        total += phi.eval(w) * inner(w) * dw
    total *= 2.0 * math.pi / circle_samples
    m10 = math.exp(m1.log_eval(0.0))
    return m10 * total / (2j * math.pi)
