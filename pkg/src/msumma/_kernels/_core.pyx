# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of msumma._kernels._fallback (same signatures).

Scaled arrays: (mant complex128, exp10 int64), value = mant * 10**exp10,
|mant| in [1,10) or exactly 0.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport floor, log10, pow

cnp.import_array()

BACKEND = "cython"

cdef long _MAX_SHIFT = 400


cdef inline void _norm1(double complex *m, long *e) noexcept:
    cdef double a = abs(m[0])
    cdef long d
    cdef long h
    if a == 0.0 or a != a or a == float("inf"):
        e[0] = 0
        return
    d = <long>floor(log10(a))
    if d > 300 or d < -300:
        # two-step rescale: a single power of ten overflows for denormals
        h = d // 2
        m[0] = (m[0] * pow(10.0, <double>(-h))) * pow(10.0, <double>(h - d))
    else:
        m[0] = m[0] * pow(10.0, -d)
    e[0] = e[0] + d
    a = abs(m[0])
    if a >= 10.0:
        m[0] = m[0] / 10.0
        e[0] += 1
    elif a < 1.0:
        m[0] = m[0] * 10.0
        e[0] -= 1


cdef inline void _add1(double complex m1, long e1, double complex m2, long e2,
                       double complex *mo, long *eo) noexcept:
    cdef long d
    if m1 == 0:
        mo[0] = m2
        eo[0] = e2 if m2 != 0 else 0
        return
    if m2 == 0:
        mo[0] = m1
        eo[0] = e1
        return
    if e1 >= e2:
        d = e2 - e1
        mo[0] = m1 + (m2 * pow(10.0, d) if d > -_MAX_SHIFT else 0.0)
        eo[0] = e1
    else:
        d = e1 - e2
        mo[0] = m2 + (m1 * pow(10.0, d) if d > -_MAX_SHIFT else 0.0)
        eo[0] = e2
    _norm1(mo, eo)


def normalize(mant, exp10):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] m = np.array(mant, dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] e = np.array(exp10, dtype=np.int64)
    cdef Py_ssize_t i, n = m.shape[0]
    cdef double complex mv
    cdef long ev
    for i in range(n):
        mv = m[i]
        ev = e[i]
        _norm1(&mv, &ev)
        m[i] = mv
        e[i] = ev
    return m, e


def add(m1, e1, m2, e2):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] a = np.ascontiguousarray(m1, dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ae = np.ascontiguousarray(e1, dtype=np.int64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] b = np.ascontiguousarray(m2, dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] be = np.ascontiguousarray(e2, dtype=np.int64)
    cdef Py_ssize_t i, n = a.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] m = np.empty(n, dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] e = np.empty(n, dtype=np.int64)
    cdef double complex mv
    cdef long ev
    for i in range(n):
        _add1(a[i], ae[i], b[i], be[i], &mv, &ev)
        m[i] = mv
        e[i] = ev
    return m, e


def mul(m1, e1, m2, e2):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] a = np.ascontiguousarray(m1, dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ae = np.ascontiguousarray(e1, dtype=np.int64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] b = np.ascontiguousarray(m2, dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] be = np.ascontiguousarray(e2, dtype=np.int64)
    cdef Py_ssize_t i, n = a.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] m = np.empty(n, dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] e = np.empty(n, dtype=np.int64)
    cdef double complex mv
    cdef long ev
    for i in range(n):
        mv = a[i] * b[i]
        ev = ae[i] + be[i]
        _norm1(&mv, &ev)
        m[i] = mv
        e[i] = ev
    return m, e


def scale(m, e, sm, se):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] a = np.ascontiguousarray(m, dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ae = np.ascontiguousarray(e, dtype=np.int64)
    cdef Py_ssize_t i, n = a.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] mo = np.empty(n, dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] eo = np.empty(n, dtype=np.int64)
    cdef double complex s = sm, mv
    cdef long sexp = se, ev
    if s == 0:
        mo[:] = 0
        eo[:] = 0
        return mo, eo
    for i in range(n):
        mv = a[i] * s
        ev = ae[i] + sexp
        _norm1(&mv, &ev)
        mo[i] = mv
        eo[i] = ev
    return mo, eo


def axpy_shift(acc_m, acc_e, src_m, src_e, sm, se, shift):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] am = np.array(acc_m, dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ae = np.array(acc_e, dtype=np.int64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] bm = np.ascontiguousarray(src_m, dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] be = np.ascontiguousarray(src_e, dtype=np.int64)
    cdef Py_ssize_t i, sh = shift
    cdef Py_ssize_t n = min(am.shape[0], bm.shape[0] - sh)
    cdef double complex s = sm, tv, mv
    cdef long sexp = se, te, ev
    if n <= 0 or s == 0:
        return am, ae
    for i in range(n):
        tv = bm[i + sh] * s
        te = be[i + sh] + sexp
        _norm1(&tv, &te)
        _add1(am[i], ae[i], tv, te, &mv, &ev)
        am[i] = mv
        ae[i] = ev
    return am, ae


def eval_scaled(mant, exp10, wm, we):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] m = np.ascontiguousarray(mant, dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] e = np.ascontiguousarray(exp10, dtype=np.int64)
    cdef Py_ssize_t j, n = m.shape[0]
    cdef double complex w = wm, am, tmp
    cdef long wexp = we, ae, etmp
    if n == 0:
        return 0j, 0
    am = m[n - 1]
    ae = e[n - 1]
    for j in range(n - 2, -1, -1):
        tmp = am * w
        etmp = ae + wexp
        _norm1(&tmp, &etmp)
        _add1(tmp, etmp, m[j], e[j], &am, &ae)
    return complex(am), int(ae)
