# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: Lindley recursion and worst-case enumerations.

Mirrors ``_kernels_py`` exactly; the NumPy versions are the reference
implementations, these exist for speed.
"""

import numpy as np

from libc.math cimport pow


def lindley_system_times(double[::1] interarrivals, double[::1] services):
    """System time of every update in an FCFS queue.

    W[i] = max(0, W[i-1] + X[i-1] - T[i]),  S[i] = W[i] + X[i].
    """
    cdef Py_ssize_t n = services.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] s = out
    cdef double w = 0.0
    cdef Py_ssize_t i
    if n == 0:
        return out
    s[0] = services[0]
    for i in range(1, n):
        w = w + services[i - 1] - interarrivals[i]
        if w < 0.0:
            w = 0.0
        s[i] = w + services[i]
    return out


def exact_single_max(double lam, double mu, double alpha,
                     double gamma_a, double gamma_s, Py_ssize_t n):
    """Max over m in {0..n-1} of
    (m+1)/mu - m/lam + gamma_s*(m+1)^(1/alpha) + gamma_a*m^(1/alpha).

    Returns (value, argmax); ties resolve to the smallest m.
    """
    cdef double ia = 1.0 / alpha
    cdef double dmu = 1.0 / mu
    cdef double dlam = 1.0 / lam
    cdef double best = -1e308
    cdef double v
    cdef Py_ssize_t m, best_m = 0
    for m in range(n):
        v = (m + 1) * dmu - m * dlam \
            + gamma_s * pow(m + 1.0, ia) + gamma_a * pow(<double> m, ia)
        if v > best:
            best = v
            best_m = m
    return best, best_m


def exact_two_max(double lam, double mu, double alpha,
                  double gamma_a, double gamma_s, Py_ssize_t n):
    """Max over the half-integer grid m in {-1/2, 0, 1/2, ..., n/2 - 1} of
    2(m+1)/mu - m/lam + 2*gamma_s*(m+1)^(1/alpha) + gamma_a*m^(1/alpha),
    with the m = -1/2 boundary defined as 1/mu + gamma_s (empty
    interarrival sum).

    Returns (value, argmax); ties resolve to the smallest m.
    """
    cdef double ia = 1.0 / alpha
    cdef double dmu = 1.0 / mu
    cdef double dlam = 1.0 / lam
    cdef double best = dmu + gamma_s
    cdef double best_m = -0.5
    cdef double m, v
    cdef Py_ssize_t j
    for j in range(1, n):
        m = 0.5 * j - 0.5
        v = 2.0 * (m + 1.0) * dmu - m * dlam \
            + 2.0 * gamma_s * pow(m + 1.0, ia) + gamma_a * pow(m, ia)
        if v > best:
            best = v
            best_m = m
    return best, best_m
