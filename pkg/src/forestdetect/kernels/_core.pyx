# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot kernels (see _fallback.py for specs)."""
import numpy as np

cimport numpy as cnp
from libc.math cimport atan, cos, exp, log, pow, sin, tan

cnp.import_array()

cdef double PI = 3.141592653589793238462643383279502884


def ecf_terms(x, double t):
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t i, n = xv.shape[0]
    cdef double cre = 0.0, cim = 0.0, tx
    for i in range(n):
        tx = t * xv[i]
        cre += cos(tx)
        cim += sin(tx)
    return cre / n, cim / n


def cms_standard(theta, w, double alpha, double beta):
    cdef double[::1] th = np.ascontiguousarray(theta, dtype=np.float64)
    cdef double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef Py_ssize_t i, n = th.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double zeta, b, s, ath, bt
    if alpha == 1.0:
        for i in range(n):
            bt = PI / 2.0 + beta * th[i]
            out[i] = (2.0 / PI) * (
                bt * tan(th[i]) - beta * log((PI / 2.0) * wv[i] * cos(th[i]) / bt)
            )
        return out_arr
    zeta = beta * tan(PI * alpha / 2.0)
    b = atan(zeta) / alpha
    s = pow(1.0 + zeta * zeta, 1.0 / (2.0 * alpha))
    for i in range(n):
        ath = alpha * (th[i] + b)
        out[i] = (
            s
            * sin(ath)
            / pow(cos(th[i]), 1.0 / alpha)
            * pow(cos(th[i] - ath) / wv[i], (1.0 - alpha) / alpha)
        )
    return out_arr


def accuracy_curve(stats, is_forest, thresholds):
    cdef double[::1] sv = np.ascontiguousarray(stats, dtype=np.float64)
    cdef cnp.uint8_t[::1] fv = np.ascontiguousarray(is_forest, dtype=np.uint8)
    cdef double[::1] tv = np.ascontiguousarray(thresholds, dtype=np.float64)
    cdef Py_ssize_t i, j, n = sv.shape[0], m = tv.shape[0]
    out_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef long correct
    cdef bint pred
    for j in range(m):
        correct = 0
        for i in range(n):
            pred = sv[i] < tv[j]
            if pred == (fv[i] != 0):
                correct += 1
        out[j] = (<double> correct) / n
    return out_arr
