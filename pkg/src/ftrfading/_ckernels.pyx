# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels; see ``_pykernels`` for the maths."""

import numpy as np
from libc.math cimport exp, lgamma, log, log1p
from libc.stdlib cimport malloc, free


cdef extern from "complex.h" nogil:
    double complex csqrt(double complex)


def ftr_transform(p, double a1, double a2, double a3, double a4, int m,
                  double lead, double ucoef):
    cdef const double complex[::1] pv = np.ascontiguousarray(p, dtype=np.complex128)
    cdef Py_ssize_t n = pv.shape[0], i
    out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] ov = out
    cdef double complex s, w, inv, z, prev, cur, nxt, ratio, rpow
    cdef int k
    with nogil:
        for i in range(n):
            s = pv[i]
            w = csqrt(s + a2) * csqrt(s + a3)
            # One complex division per point; the rest are products.
            inv = 1.0 / w
            z = ucoef * (s + a1) * inv
            prev = 1.0
            cur = z
            if m == 1:
                cur = 1.0
            else:
                for k in range(1, m - 1):
                    nxt = ((2 * k + 1) * z * cur - k * prev) * (1.0 / (k + 1))
                    prev = cur
                    cur = nxt
            ratio = (s + a4) * inv
            rpow = 1.0
            for k in range(m - 1):
                rpow = rpow * ratio
            ov[i] = lead * rpow * cur * inv
    return out


def mixture_pdf(x, double beta, int m, kappas, weights):
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef const double[::1] kv = np.ascontiguousarray(kappas, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t nx = xv.shape[0], nk = kv.shape[0], i, j
    out = np.zeros(nx, dtype=np.float64)
    cdef double[::1] ov = out
    # Polynomial coefficients in x, highest power first; the x loops are
    # innermost so each pass is independent across points.
    cdef double *coef = <double *> malloc(m * sizeof(double))
    cdef double *poly = <double *> malloc(nx * sizeof(double))
    cdef double tau, rho, c, rate, cn
    cdef int n
    if coef == NULL or poly == NULL:
        free(coef)
        free(poly)
        raise MemoryError()
    try:
        with nogil:
            for j in range(nk):
                tau = m / (kv[j] + m)
                rho = kv[j] / (kv[j] + m)
                rate = beta * tau
                c = wv[j] * beta
                for n in range(m):
                    c = c * tau
                # c_n = w beta tau^m C(m-1, n) (rho beta)^n / n!
                coef[m - 1] = c
                for n in range(m - 1):
                    c = c * (m - 1 - n) / ((n + 1.0) * (n + 1.0)) * rho * beta
                    coef[m - 2 - n] = c
                cn = coef[0]
                for i in range(nx):
                    poly[i] = cn
                for n in range(1, m):
                    cn = coef[n]
                    for i in range(nx):
                        poly[i] = poly[i] * xv[i] + cn
                for i in range(nx):
                    ov[i] += poly[i] * exp(-rate * xv[i])
    finally:
        free(coef)
        free(poly)
    return out


def mixture_sf(x, double beta, int m, kappas, weights):
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef const double[::1] kv = np.ascontiguousarray(kappas, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t nx = xv.shape[0], nk = kv.shape[0], i, j
    out = np.zeros(nx, dtype=np.float64)
    cdef double[::1] ov = out
    cdef double *tail = <double *> malloc(m * sizeof(double))
    cdef double *pmf = <double *> malloc(m * sizeof(double))
    cdef double *lam = <double *> malloc(nx * sizeof(double))
    cdef double *pois = <double *> malloc(nx * sizeof(double))
    cdef double *total = <double *> malloc(nx * sizeof(double))
    cdef double tau, rho, acc, t, step
    cdef int k, q
    if tail == NULL or pmf == NULL or lam == NULL or pois == NULL or total == NULL:
        free(tail)
        free(pmf)
        free(lam)
        free(pois)
        free(total)
        raise MemoryError()
    try:
        with nogil:
            for j in range(nk):
                tau = m / (kv[j] + m)
                rho = kv[j] / (kv[j] + m)
                # Binomial(m-1, rho) pmf in log space; (1 - rho)^(m-1) alone
                # would underflow for large m rho. rho < 1 always since m > 0.
                if rho == 0:
                    pmf[0] = 1.0
                    for k in range(1, m):
                        pmf[k] = 0.0
                else:
                    for k in range(m):
                        pmf[k] = exp(lgamma(m) - lgamma(k + 1.0) - lgamma(<double> (m - k))
                                     + k * log(rho) + (m - 1 - k) * log1p(-rho))
                acc = 0.0
                for k in range(m - 1, -1, -1):
                    acc = acc + pmf[k]
                    tail[k] = acc
                t = tail[0]
                for i in range(nx):
                    lam[i] = beta * tau * xv[i]
                    pois[i] = exp(-lam[i])
                    total[i] = pois[i] * t
                for q in range(1, m):
                    step = 1.0 / q
                    t = tail[q]
                    for i in range(nx):
                        pois[i] = pois[i] * lam[i] * step
                        total[i] = total[i] + pois[i] * t
                for i in range(nx):
                    ov[i] += wv[j] * total[i]
    finally:
        free(tail)
        free(pmf)
        free(lam)
        free(pois)
        free(total)
    return out
