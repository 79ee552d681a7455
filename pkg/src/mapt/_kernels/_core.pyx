# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementation of the hot kernels (see package docstring)."""

from libc.math cimport exp, log, INFINITY
from scipy.special.cython_special cimport gammaln

import numpy as np


def log_m_table(theta0, nl, nr, nu_flat, offsets):
    theta0 = np.ascontiguousarray(theta0, dtype=np.float64)
    nl = np.ascontiguousarray(nl, dtype=np.float64)
    nr = np.ascontiguousarray(nr, dtype=np.float64)
    nu_flat = np.ascontiguousarray(nu_flat, dtype=np.float64)
    offsets = np.ascontiguousarray(offsets, dtype=np.intp)
    cdef Py_ssize_t n = theta0.shape[0]
    cdef Py_ssize_t n_comp = offsets.shape[0] - 1
    cdef Py_ssize_t n_nu = nu_flat.shape[0]
    out = np.empty((n, n_comp), dtype=np.float64)
    # lgamma(nu) is the only term free of per-node quantities; hoist it
    lg_nu = np.empty(max(n_nu, 1), dtype=np.float64)
    scratch = np.empty(max(n_nu, 1), dtype=np.float64)
    cdef double[::1] t0v = theta0
    cdef double[::1] nlv = nl
    cdef double[::1] nrv = nr
    cdef double[::1] nuv = nu_flat
    cdef Py_ssize_t[::1] offv = offsets
    cdef double[:, ::1] outv = out
    cdef double[::1] lgnuv = lg_nu
    cdef double[::1] buf = scratch
    cdef Py_ssize_t j, c, h, s, e
    cdef double t0, a, b, tot, nu, v, hi, acc
    with nogil:
        for h in range(n_nu):
            lgnuv[h] = gammaln(nuv[h])
        for j in range(n):
            t0 = t0v[j]
            tot = nlv[j] + nrv[j]
            if tot == 0.0:
                for c in range(n_comp):
                    outv[j, c] = 0.0
                continue
            for c in range(n_comp):
                s = offv[c]
                e = offv[c + 1]
                if s == e:
                    outv[j, c] = nlv[j] * log(t0) + nrv[j] * log(1.0 - t0)
                    continue
                hi = -INFINITY
                for h in range(s, e):
                    nu = nuv[h]
                    a = t0 * nu
                    b = (1.0 - t0) * nu
                    v = (gammaln(a + nlv[j]) + gammaln(b + nrv[j]) + lgnuv[h]
                         - gammaln(nu + tot) - gammaln(a) - gammaln(b))
                    buf[h] = v
                    if v > hi:
                        hi = v
                acc = 0.0
                for h in range(s, e):
                    acc += exp(buf[h] - hi)
                outv[j, c] = hi + log(acc) - log(<double>(e - s))
    return out


def forward_combine(log_rows, payload):
    log_rows = np.ascontiguousarray(log_rows, dtype=np.float64)
    payload = np.ascontiguousarray(payload, dtype=np.float64)
    cdef Py_ssize_t n = payload.shape[0]
    cdef Py_ssize_t n_states = payload.shape[1]
    cdef Py_ssize_t n_rows = log_rows.shape[0]
    out = np.empty((n, n_rows), dtype=np.float64)
    cdef double[:, ::1] rowsv = log_rows
    cdef double[:, ::1] payv = payload
    cdef double[:, ::1] outv = out
    cdef Py_ssize_t j, r, i
    cdef double hi, acc, v
    with nogil:
        for j in range(n):
            for r in range(n_rows):
                hi = -INFINITY
                for i in range(n_states):
                    v = rowsv[r, i] + payv[j, i]
                    if v > hi:
                        hi = v
                if hi == -INFINITY:
                    outv[j, r] = -INFINITY
                    continue
                acc = 0.0
                for i in range(n_states):
                    v = rowsv[r, i] + payv[j, i]
                    acc += exp(v - hi)
                outv[j, r] = hi + log(acc)
    return out
