# cython: language_level=3
"""Compiled twins of the kernels in ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange
from libc.math cimport sin, cos, sqrt, hypot

cnp.import_array()

cdef double SERIES_RADIUS = 1.0
cdef int SERIES_TERMS = 14


cdef inline double _series_y(int l, double r2) noexcept nogil:
    cdef double dfact = 1.0
    cdef int j, kk
    for j in range(1, 2 * l + 2, 2):
        dfact *= j
    cdef double term = 1.0 / dfact
    cdef double total = term
    for kk in range(1, SERIES_TERMS):
        term = term * (-0.5 * r2) / (kk * (2 * l + 2 * kk + 1))
        total += term
    return total


cdef inline double _omni_d2(double b, double z) noexcept nogil:
    cdef double r2 = b * b + z * z
    cdef double r, s, c, y1, y2
    if r2 < SERIES_RADIUS * SERIES_RADIUS:
        return z * z * _series_y(2, r2) - _series_y(1, r2)
    r = sqrt(r2)
    s = sin(r)
    c = cos(r)
    y1 = (s - r * c) / (r2 * r)
    y2 = ((3.0 - r2) * s - 3.0 * r * c) / (r2 * r2 * r)
    return z * z * y2 - y1


cdef double _population_row(const double[:, ::1] p, const double[::1] a, Py_ssize_t n,
                            Py_ssize_t q, double k, double tx, double ty) noexcept nogil:
    cdef double acc = 0.0
    cdef double dx, dy
    cdef Py_ssize_t m, j
    for m in range(n):
        for j in range(m + 1, n):
            dx = p[q, j] - p[q, m]
            dy = p[q, n + j] - p[q, n + m]
            acc = acc + a[m] * a[j] * _omni_d2(k * hypot(dx, dy), k * (tx * dx + ty * dy))
    return acc


cdef double _curve_point(const double[::1] bu, const double[::1] zu, const double[::1] w,
                         double s) noexcept nogil:
    cdef double acc = 0.0
    cdef Py_ssize_t j
    for j in range(bu.shape[0]):
        acc = acc + w[j] * _omni_d2(s * bu[j], s * zu[j])
    return acc


cdef double _power_at(const double[:, ::1] dv, const double[:, ::1] pv, const double[::1] a,
                      const double[::1] ph, Py_ssize_t n, Py_ssize_t i, double k) noexcept nogil:
    cdef double re = 0.0
    cdef double im = 0.0
    cdef double arg
    cdef Py_ssize_t j
    for j in range(n):
        arg = ph[j] + k * (pv[j, 0] * dv[i, 0] + pv[j, 1] * dv[i, 1] + pv[j, 2] * dv[i, 2])
        re = re + a[j] * cos(arg)
        im = im + a[j] * sin(arg)
    return re * re + im * im


def omni_d2(b, z):
    bb, zz = np.broadcast_arrays(np.asarray(b, dtype=np.float64), np.asarray(z, dtype=np.float64))
    shape = bb.shape
    cdef const double[::1] bf = np.ascontiguousarray(bb).ravel()
    cdef const double[::1] zf = np.ascontiguousarray(zz).ravel()
    out = np.empty(bf.shape[0], dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    for i in prange(bf.shape[0], nogil=True, schedule="static"):
        o[i] = _omni_d2(bf[i], zf[i])
    return out.reshape(shape)


def omni_pair_sum(b, z, w):
    cdef const double[::1] bf = np.ascontiguousarray(b, dtype=np.float64).ravel()
    cdef const double[::1] zf = np.ascontiguousarray(z, dtype=np.float64).ravel()
    cdef const double[::1] wf = np.ascontiguousarray(w, dtype=np.float64).ravel()
    cdef double acc = 0.0
    cdef Py_ssize_t i
    with nogil:
        for i in range(bf.shape[0]):
            acc += wf[i] * _omni_d2(bf[i], zf[i])
    return acc


def omni_objective_population(xy, amps, double k, double tx, double ty):
    cdef const double[:, ::1] p = np.ascontiguousarray(xy, dtype=np.float64)
    cdef const double[::1] a = np.ascontiguousarray(amps, dtype=np.float64)
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t npop = p.shape[0]
    out = np.empty(npop, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t q
    for q in prange(npop, nogil=True, schedule="static"):
        o[q] = -_population_row(p, a, n, q, k, tx, ty)
    return out


def upa_objective_curve(ds, bunit, zunit, mult, double k):
    cdef const double[::1] d = np.ascontiguousarray(ds, dtype=np.float64).ravel()
    cdef const double[::1] bu = np.ascontiguousarray(bunit, dtype=np.float64)
    cdef const double[::1] zu = np.ascontiguousarray(zunit, dtype=np.float64)
    cdef const double[::1] w = np.ascontiguousarray(mult, dtype=np.float64)
    out = np.empty(d.shape[0], dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    for i in prange(d.shape[0], nogil=True, schedule="static"):
        o[i] = -_curve_point(bu, zu, w, k * d[i])
    return out


def array_power(dirs, pos, amps, phases, double k):
    cdef const double[:, ::1] dv = np.ascontiguousarray(dirs, dtype=np.float64)
    cdef const double[:, ::1] pv = np.ascontiguousarray(pos, dtype=np.float64)
    cdef const double[::1] a = np.ascontiguousarray(amps, dtype=np.float64)
    cdef const double[::1] ph = np.ascontiguousarray(phases, dtype=np.float64)
    cdef Py_ssize_t m = dv.shape[0]
    cdef Py_ssize_t n = pv.shape[0]
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    for i in prange(m, nogil=True, schedule="static"):
        o[i] = _power_at(dv, pv, a, ph, n, i, k)
    return out
