"""Diagonal Pade approximants with coefficient rescaling and pole tracking.

The Borel-plane function is only known through truncated Taylor
coefficients; near-diagonal Pade is the numeric surrogate for its analytic
continuation.  Coefficients are rescaled by the geometric slope of their
magnitudes before solving the linear system, so series with radius far
from 1 stay well conditioned; poles are mapped back afterwards.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import pade as _scipy_pade

from .series import RamifiedSeries

STABILITY_TOL = 1e-2  # relative pole agreement across consecutive orders


def geometric_slope(log10_abs: np.ndarray) -> float:
    """Median decimal log-slope of the coefficient magnitudes."""
    finite = np.isfinite(log10_abs)
    idx = np.nonzero(finite)[0]
    if len(idx) < 2:
        return 0.0
    d = np.diff(log10_abs[idx]) / np.diff(idx)
    return float(np.median(d))


@dataclass(frozen=True)
class PadeApproximant:
    """[L/M] approximant of sum c_j x^j with an internal rescaling x = r*y."""

    num: np.poly1d
    den: np.poly1d
    r: float
    order: tuple

    def __call__(self, x):
        y = np.asarray(x, dtype=np.complex128) / self.r
        return self.num(y) / self.den(y)

    def poles(self) -> np.ndarray:
        p = np.roots(self.den.coeffs) * self.r
        return p[np.argsort(np.abs(p))]

    def significant_poles(self, rel_tol: float = 1e-8) -> np.ndarray:
        """Poles whose residue is non-negligible.

        Spurious pole-zero doublets from (near-)degenerate coefficient
        systems carry residues many orders below the genuine ones; they are
        dropped relative to the largest residue present.
        """
        y = np.roots(self.den.coeffs)
        if len(y) == 0:
            return y
        dden = self.den.deriv()
        with np.errstate(divide="ignore", invalid="ignore"):
            res = np.abs(self.num(y) / dden(y))
        res = np.where(np.isfinite(res), res, np.inf)
        top = res.max()
        if not np.isfinite(top) or top == 0.0:
            keep = np.ones(len(y), dtype=bool)
        else:
            keep = res > rel_tol * top
        p = y[keep] * self.r
        return p[np.argsort(np.abs(p))]


def _scaled_coeffs(a) -> tuple[np.ndarray, float]:
    """Flatten |c_j| ~ 10^(s*j) to d_j = c_j * r^j with r = 10^(-s)."""
    if isinstance(a, RamifiedSeries):
        logs = a.log10_abs()
        slope = geometric_slope(logs)
        out = np.zeros(len(a), dtype=np.complex128)
        for j in range(len(a)):
            c = a[j]
            if c:
                mag = 10.0 ** (c.log10_abs() - slope * j)
                out[j] = mag * c.mantissa / abs(c.mantissa)
        return out, 10.0 ** (-slope)
    a = np.asarray(a, dtype=np.complex128)
    with np.errstate(divide="ignore"):
        logs = np.where(a != 0, np.log10(np.abs(np.where(a != 0, a, 1.0))),
                        -np.inf)
    slope = geometric_slope(logs)
    scale = 10.0 ** (-slope * np.arange(len(a)))
    return a * scale, 10.0 ** (-slope)


def diagonal_pade(a, M: int, L: int | None = None) -> PadeApproximant:
    """Near-diagonal [L/M] Pade (default L = M - 1) of a coefficient series.

    The rescaled coefficients d_j = c_j * r^j are O(1); the returned object
    evaluates and reports poles in the original variable.
    """
    d, r = _scaled_coeffs(a)
    if L is None:
        L = M - 1
    need = L + M + 1
    if len(d) < need:
        raise ValueError(f"need {need} coefficients for [{L}/{M}], got {len(d)}")
    with warnings.catch_warnings():
        # near-diagonal Pade systems are routinely ill conditioned; the
        # cross-order stability filter is what certifies the poles
        warnings.simplefilter("ignore")
        while True:
            try:
                num, den = _scipy_pade(d[:need], M, L)
                break
            except np.linalg.LinAlgError:
                # exactly rational input makes the Toeplitz system
                # singular; step down to the smallest order that resolves it
                M -= 1
                L = min(L, max(M - 1, 0))
                need = L + M + 1
                if M < 1:
                    raise
    return PadeApproximant(num=num, den=den, r=r, order=(L, M))


def _cluster(pole_sets, tol=STABILITY_TOL):
    """Poles of pole_sets[0] recurring in every other set within tol."""
    out = []
    for p in pole_sets[0]:
        group = [p]
        for other in pole_sets[1:]:
            if len(other) == 0:
                group = None
                break
            d = np.abs(other - p)
            i = int(np.argmin(d))
            if d[i] <= tol * max(1e-300, abs(p)):
                group.append(other[i])
            else:
                group = None
                break
        if group is not None:
            center = np.mean(group)
            radius = max(max(abs(g - center) for g in group),
                         tol * abs(center) * 0.1)
            out.append((complex(center), float(radius)))
    out.sort(key=lambda t: abs(t[0]))
    return out


def stable_poles(a, n_coeffs: int | None = None):
    """Poles persisting across three consecutive Pade orders.

    Orders [M-1/M] with M = n//2 for n in {N, N-1, N-2}; a pole counts as
    stable when each order reproduces it within STABILITY_TOL relative.
    Returns a list of (location, confidence_radius) sorted by modulus.
    """
    if isinstance(a, RamifiedSeries):
        total = len(a)
    else:
        total = len(a)
    n = total if n_coeffs is None else min(n_coeffs, total)
    if n < 8:
        raise ValueError("need at least 8 coefficients for pole tracking")
    sets = []
    for nk in (n, n - 1, n - 2):
        m = nk // 2
        ap = diagonal_pade(a, m)
        sets.append(ap.significant_poles())
    return _cluster(sets)


def ratio_radius(a) -> float:
    """Nearest-singularity modulus from the coefficient ratio test (crude)."""
    if isinstance(a, RamifiedSeries):
        logs = a.log10_abs()
    else:
        arr = np.asarray(a, dtype=np.complex128)
        with np.errstate(divide="ignore"):
            logs = np.where(arr != 0, np.log10(np.abs(np.where(arr != 0, arr,
                                                               1.0))), -np.inf)
    slope = geometric_slope(np.asarray(logs))
    if not math.isfinite(slope):
        return math.inf
    return 10.0 ** (-slope)
