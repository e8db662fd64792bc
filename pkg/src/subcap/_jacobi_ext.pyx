# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled cyclic Jacobi sweeps for dense complex Hermitian matrices.

Same round-robin schedule and rotation as ``_jacobi_py``. Complex entries are
handled as interleaved (re, im) doubles through raw pointers. Only rows ``p``
and ``q`` are recomputed per rotation; the matching columns are written by
Hermitian symmetry. Eigenvectors are accumulated as the rows of ``vt``.
"""
from libc.math cimport sqrt, hypot

import numpy as np


cdef double _offdiag_frobenius(const double* a, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double acc = 0.0, re, im
    cdef const double* row
    for i in range(n):
        row = a + 2 * n * i
        for j in range(n):
            if i != j:
                re = row[2 * j]
                im = row[2 * j + 1]
                acc += re * re + im * im
    return sqrt(acc)


cdef inline void _mix(double* xp, double* xq, double c, double s,
                      double pr, double pi) noexcept nogil:
    # (xp, xq) <- (c xp - s e xq, s xp + c e xq), e = pr + i pi
    cdef double xpr = xp[0], xpi = xp[1]
    cdef double er = xq[0] * pr - xq[1] * pi
    cdef double ei = xq[0] * pi + xq[1] * pr
    xp[0] = c * xpr - s * er
    xp[1] = c * xpi - s * ei
    xq[0] = s * xpr + c * er
    xq[1] = s * xpi + c * ei


cdef void _rotate(double* a, double* vt, Py_ssize_t n,
                  Py_ssize_t p, Py_ssize_t q, double skip) noexcept nogil:
    cdef Py_ssize_t w = 2 * n
    cdef double* rp = a + w * p
    cdef double* rq = a + w * q
    cdef double apr = rp[2 * q], api = rp[2 * q + 1]
    cdef double mag = hypot(apr, api)
    if mag <= skip:
        return
    cdef double app = rp[2 * p]
    cdef double aqq = rq[2 * q]
    cdef double pr = apr / mag, pi = api / mag
    cdef double theta = (aqq - app) / (2.0 * mag)
    cdef double t
    if theta >= 0.0:
        t = 1.0 / (theta + sqrt(theta * theta + 1.0))
    else:
        t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
    cdef double c = 1.0 / sqrt(1.0 + t * t)
    cdef double s = t * c
    cdef Py_ssize_t k
    cdef double* rk
    for k in range(n):
        if k == p or k == q:
            continue
        _mix(rp + 2 * k, rq + 2 * k, c, s, pr, pi)
        rk = a + w * k
        rk[2 * p] = rp[2 * k]
        rk[2 * p + 1] = -rp[2 * k + 1]
        rk[2 * q] = rq[2 * k]
        rk[2 * q + 1] = -rq[2 * k + 1]
    rp[2 * q] = 0.0
    rp[2 * q + 1] = 0.0
    rq[2 * p] = 0.0
    rq[2 * p + 1] = 0.0
    rp[2 * p] = app - t * mag
    rp[2 * p + 1] = 0.0
    rq[2 * q] = aqq + t * mag
    rq[2 * q + 1] = 0.0
    cdef double* vp = vt + w * p
    cdef double* vq = vt + w * q
    for k in range(n):
        _mix(vp + 2 * k, vq + 2 * k, c, s, pr, -pi)


def jacobi_sweeps(a, vt, long[:, :, ::1] schedule, int max_sweeps,
                  double tol, double skip):
    """Run sweeps in place on ``a`` and ``vt`` (complex128, C-contiguous).

    Returns ``(sweeps, off)``; ``off`` is the final off-diagonal Frobenius norm.
    """
    cdef double[:, ::1] ar = a.view(np.float64)
    cdef double[:, ::1] vr = vt.view(np.float64)
    cdef Py_ssize_t n = a.shape[0]
    if n == 0:
        return 0, 0.0
    cdef double* pa = &ar[0, 0]
    cdef double* pv = &vr[0, 0]
    cdef Py_ssize_t rounds = schedule.shape[0]
    cdef Py_ssize_t npairs = schedule.shape[1]
    cdef Py_ssize_t r, k, p, q
    cdef int sweep = 0
    cdef double off
    with nogil:
        off = _offdiag_frobenius(pa, n)
        while off > tol and sweep < max_sweeps:
            for r in range(rounds):
                for k in range(npairs):
                    p = schedule[r, k, 0]
                    q = schedule[r, k, 1]
                    if p >= 0:
                        _rotate(pa, pv, n, p, q, skip)
            sweep += 1
            off = _offdiag_frobenius(pa, n)
    return sweep, off
