"""Pure numpy implementation of the scaled-coefficient kernels.

A scaled array is a pair (mant, exp10): mant is complex128 with magnitude
in [1, 10) (or exactly 0), exp10 is int64, and the represented value is
mant * 10**exp10.  Series coefficients like (2j)! overflow double near
j ~ 85, so all coefficient arithmetic runs on this representation.

The Cython twin (_core.pyx) implements the same signatures; which one is
active is decided in msumma._kernels.__init__.
"""
from __future__ import annotations

import numpy as np

BACKEND = "fallback"

# exponent alignment beyond this underflows double anyway
_MAX_SHIFT = 400
_MIN_EXP = np.int64(-(10**9))


def normalize(mant, exp10):
    """Return (m, e) with |m| in [1,10) or m == 0 (then e == 0)."""
    m = np.array(mant, dtype=np.complex128, copy=True)
    e = np.array(exp10, dtype=np.int64, copy=True)
    a = np.abs(m)
    nz = (a > 0) & np.isfinite(a)
    if np.any(nz):
        d = np.floor(np.log10(a[nz])).astype(np.int64)
        # two-step rescale for exponents whose single power of ten overflows
        # (denormal inputs reach d = -324)
        d1 = d // 2
        d2 = d - d1
        big = np.abs(d) > 300
        mnz = m[nz]
        mnz[big] = (mnz[big] * 10.0 ** (-d1[big].astype(np.float64))) \
            * 10.0 ** (-d2[big].astype(np.float64))
        mnz[~big] *= 10.0 ** (-d[~big].astype(np.float64))
        m[nz] = mnz
        e[nz] += d
        # one rounding-correction pass
        a2 = np.abs(m)
        hi = nz.copy()
        hi[nz] = a2[nz] >= 10.0
        m[hi] /= 10.0
        e[hi] += 1
        lo = nz.copy()
        lo[nz] = a2[nz] < 1.0
        m[lo] *= 10.0
        e[lo] -= 1
    z = ~nz & np.isfinite(a)
    e[z] = 0
    return m, e


def add(m1, e1, m2, e2):
    m1 = np.asarray(m1, dtype=np.complex128)
    m2 = np.asarray(m2, dtype=np.complex128)
    e1 = np.asarray(e1, dtype=np.int64)
    e2 = np.asarray(e2, dtype=np.int64)
    e1f = np.where(m1 == 0, _MIN_EXP, e1)
    e2f = np.where(m2 == 0, _MIN_EXP, e2)
    E = np.maximum(e1f, e2f)
    E = np.where(E == _MIN_EXP, 0, E)
    d1 = np.clip(e1f - E, -_MAX_SHIFT, 0).astype(np.float64)
    d2 = np.clip(e2f - E, -_MAX_SHIFT, 0).astype(np.float64)
    m = m1 * 10.0**d1 + m2 * 10.0**d2
    return normalize(m, E)


def mul(m1, e1, m2, e2):
    m1 = np.asarray(m1, dtype=np.complex128)
    m2 = np.asarray(m2, dtype=np.complex128)
    e = np.asarray(e1, dtype=np.int64) + np.asarray(e2, dtype=np.int64)
    return normalize(m1 * m2, e)


def scale(m, e, sm, se):
    """Multiply a scaled array elementwise by the scaled scalar (sm, se)."""
    m = np.asarray(m, dtype=np.complex128)
    e = np.asarray(e, dtype=np.int64)
    if sm == 0:
        return np.zeros_like(m), np.zeros_like(e)
    return normalize(m * sm, e + np.int64(se))


def axpy_shift(acc_m, acc_e, src_m, src_e, sm, se, shift):
    """acc[i] += (sm,se) * src[i+shift] for the overlapping index range."""
    acc_m = np.array(acc_m, dtype=np.complex128, copy=True)
    acc_e = np.array(acc_e, dtype=np.int64, copy=True)
    n = min(len(acc_m), len(src_m) - shift)
    if n <= 0:
        return acc_m, acc_e
    tm, te = scale(src_m[shift:shift + n], src_e[shift:shift + n], sm, se)
    rm, re = add(acc_m[:n], acc_e[:n], tm, te)
    acc_m[:n] = rm
    acc_e[:n] = re
    return acc_m, acc_e


def _s_add(m1, e1, m2, e2):
    if m1 == 0:
        return m2, e2
    if m2 == 0:
        return m1, e1
    if e1 >= e2:
        d = e2 - e1
        m = m1 + (m2 * 10.0**d if d > -_MAX_SHIFT else 0.0)
        E = e1
    else:
        d = e1 - e2
        m = m2 + (m1 * 10.0**d if d > -_MAX_SHIFT else 0.0)
        E = e2
    return _s_norm(m, E)


def _s_norm(m, e):
    a = abs(m)
    if a == 0.0 or not np.isfinite(a):
        return m, 0
    import math

    d = int(math.floor(math.log10(a)))
    m = m * 10.0 ** (-d)
    e = e + d
    a = abs(m)
    if a >= 10.0:
        m /= 10.0
        e += 1
    elif a < 1.0:
        m *= 10.0
        e -= 1
    return m, e


def eval_scaled(mant, exp10, wm, we):
    """Horner evaluation sum_j c_j w^j; w given scaled, result scaled."""
    n = len(mant)
    if n == 0:
        return 0j, 0
    am = complex(mant[n - 1])
    ae = int(exp10[n - 1])
    for j in range(n - 2, -1, -1):
        am, ae = _s_norm(am * wm, ae + we)
        am, ae = _s_add(am, ae, complex(mant[j]), int(exp10[j]))
    return am, ae
