# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the hot kernels (see ``_pykernels`` for the reference)."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, hypot

from .errors import SingularMatrixError

cnp.import_array()

NAME = "cython"

RANK_RTOL = 1e-12
JACOBI_MAX_SWEEPS = 100
cdef int _MAX_SWEEPS = JACOBI_MAX_SWEEPS


cdef inline double cabs2(double complex z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


cdef inline double cmod(double complex z) noexcept nogil:
    return hypot(z.real, z.imag)


cdef inline double complex conj(double complex z) noexcept nogil:
    return z.conjugate()


def argmax_abs_corr(const double complex[:, ::1] D, const double complex[::1] r):
    cdef Py_ssize_t m = D.shape[0], n = D.shape[1]
    cdef Py_ssize_t i, j, best = 0
    cdef double val, bestval = -1.0, rr, ri, dr, di
    # column sums accumulated row by row to keep the access pattern contiguous
    cdef double[::1] acc = np.zeros(2 * n, dtype=np.float64)
    cdef const double *row
    with nogil:
        for i in range(m):
            rr = r[i].real
            ri = r[i].imag
            row = <const double *> &D[i, 0]
            for j in range(n):
                dr = row[2 * j]
                di = row[2 * j + 1]
                acc[2 * j] += dr * rr + di * ri
                acc[2 * j + 1] += dr * ri - di * rr
        for j in range(n):
            val = hypot(acc[2 * j], acc[2 * j + 1])
            if val > bestval:
                bestval = val
                best = j
    return int(best), float(bestval)


def qr_lstsq(A, y, double rtol=RANK_RTOL):
    cdef double complex[:, ::1] R = np.array(A, dtype=np.complex128, order="C", copy=True)
    cdef double complex[::1] b = np.array(y, dtype=np.complex128, copy=True)
    cdef Py_ssize_t m = R.shape[0], n = R.shape[1]
    cdef Py_ssize_t i, j, k, p
    cdef cnp.intp_t[::1] perm = np.arange(n, dtype=np.intp)
    cdef double complex[:, ::1] V = np.zeros((n, m), dtype=np.complex128)
    cdef double[::1] colnorm = np.zeros(n, dtype=np.float64)
    cdef double complex alpha, phase, x0, dot, tmp, denom
    cdef double nrm, tail2, ax0, best, r00 = 0.0
    cdef double[::1] tau = np.zeros(n, dtype=np.float64)
    cdef cnp.intp_t itmp
    cdef bint has_v
    cdef unsigned char[::1] active = np.zeros(n, dtype=np.uint8)

    for j in range(n):
        # pivot: largest remaining column norm of the trailing block
        for k in range(j, n):
            colnorm[k] = 0.0
        for i in range(j, m):
            for k in range(j, n):
                colnorm[k] += cabs2(R[i, k])
        p = j
        best = colnorm[j]
        for k in range(j + 1, n):
            if colnorm[k] > best:
                best = colnorm[k]
                p = k
        if p != j:
            for i in range(m):
                tmp = R[i, j]
                R[i, j] = R[i, p]
                R[i, p] = tmp
            itmp = perm[j]
            perm[j] = perm[p]
            perm[p] = itmp

        x0 = R[j, j]
        ax0 = cmod(x0)
        tail2 = 0.0
        for i in range(j + 1, m):
            tail2 += cabs2(R[i, j])
        has_v = False
        if tail2 == 0.0:
            # already a multiple of e_1 (or zero): no reflection
            alpha = x0
        else:
            nrm = sqrt(ax0 * ax0 + tail2)
            if ax0 != 0.0:
                phase = x0 / ax0
            else:
                phase = 1.0
            alpha = -phase * nrm
            denom = x0 - alpha
            V[j, j] = 1.0
            for i in range(j + 1, m):
                V[j, i] = R[i, j] / denom
            tau[j] = (nrm + ax0) / nrm
            has_v = True
        if j == 0:
            r00 = cmod(alpha)
        if r00 == 0.0 or cmod(alpha) <= rtol * r00:
            raise SingularMatrixError(int(perm[j]))
        active[j] = has_v
        if has_v:
            for k in range(j, n):
                dot = 0.0
                for i in range(j, m):
                    dot = dot + conj(V[j, i]) * R[i, k]
                for i in range(j, m):
                    R[i, k] = R[i, k] - tau[j] * V[j, i] * dot
            dot = 0.0
            for i in range(j, m):
                dot = dot + conj(V[j, i]) * b[i]
            for i in range(j, m):
                b[i] = b[i] - tau[j] * V[j, i] * dot
        R[j, j] = alpha
        for i in range(j + 1, m):
            R[i, j] = 0.0

    cdef double complex[::1] z = np.zeros(n, dtype=np.complex128)
    for i in range(n - 1, -1, -1):
        dot = b[i]
        for k in range(i + 1, n):
            dot = dot - R[i, k] * z[k]
        z[i] = dot / R[i, i]
    coeffs = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] cv = coeffs
    for i in range(n):
        cv[perm[i]] = z[i]

    res = np.array(b, dtype=np.complex128, copy=True)
    cdef double complex[::1] rv = res
    for i in range(n):
        rv[i] = 0.0
    for j in range(n - 1, -1, -1):
        if not active[j]:
            continue
        dot = 0.0
        for i in range(j, m):
            dot = dot + conj(V[j, i]) * rv[i]
        for i in range(j, m):
            rv[i] = rv[i] - tau[j] * V[j, i] * dot
    return coeffs, res


def jacobi_min_eig(G):
    cdef double complex[:, ::1] A = np.array(G, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = A.shape[0]
    cdef Py_ssize_t i, p, q, sweep
    cdef double scale = 0.0, off, tol, mag, app, aqq, theta, t, c, s, lo
    cdef double complex apq, ph, phc, xp, xq
    if n == 1:
        return float(A[0, 0].real)
    for p in range(n):
        for q in range(n):
            scale += cabs2(A[p, q])
    scale = sqrt(scale)
    if scale == 0.0:
        return 0.0
    tol = 1e-15 * scale
    with nogil:
        for sweep in range(_MAX_SWEEPS):
            off = 0.0
            for p in range(n):
                for q in range(n):
                    if p != q:
                        off += cabs2(A[p, q])
            if sqrt(off) <= tol:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = A[p, q]
                    mag = cmod(apq)
                    if mag <= 1e-300:
                        continue
                    ph = apq / mag
                    phc = conj(ph)
                    for i in range(n):
                        A[i, q] = A[i, q] * phc
                    for i in range(n):
                        A[q, i] = A[q, i] * ph
                    app = A[p, p].real
                    aqq = A[q, q].real
                    theta = (aqq - app) / (2.0 * mag)
                    if theta >= 0:
                        t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                    else:
                        t = -1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                    c = 1.0 / sqrt(t * t + 1.0)
                    s = t * c
                    for i in range(n):
                        xp = A[i, p]
                        xq = A[i, q]
                        A[i, p] = c * xp - s * xq
                        A[i, q] = s * xp + c * xq
                    for i in range(n):
                        xp = A[p, i]
                        xq = A[q, i]
                        A[p, i] = c * xp - s * xq
                        A[q, i] = s * xp + c * xq
                    A[p, q] = 0.0
                    A[q, p] = 0.0
    lo = A[0, 0].real
    for i in range(1, n):
        if A[i, i].real < lo:
            lo = A[i, i].real
    return float(lo)
