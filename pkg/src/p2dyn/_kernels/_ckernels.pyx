# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled orbit kernels.  Same contracts as ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, log, acos
from libc.stdlib cimport malloc, free

cnp.import_array()

ctypedef double complex cplx

cdef enum:
    FATOU = 0
    JULIA = 1
    NEAR_IND = 2
    UNRESOLVED = 3


cdef inline double _abs2(cplx a) noexcept nogil:
    return a.real * a.real + a.imag * a.imag


cdef void _eval_one(const cplx[::1] coef, const cnp.int64_t[:, ::1] exps,
                    const cnp.int64_t[::1] comp, const cplx* w, cplx* pw,
                    int md, cplx* out) noexcept nogil:
    cdef int v, k
    cdef Py_ssize_t t, T = coef.shape[0]
    cdef int stride = md + 1
    for v in range(3):
        pw[v * stride] = 1.0
        for k in range(1, md + 1):
            pw[v * stride + k] = pw[v * stride + k - 1] * w[v]
    out[0] = 0.0
    out[1] = 0.0
    out[2] = 0.0
    for t in range(T):
        out[comp[t]] = out[comp[t]] + coef[t] * pw[exps[t, 0]] * pw[stride + exps[t, 1]] * pw[2 * stride + exps[t, 2]]


def eval_lift(const cplx[::1] coef, const cnp.int64_t[:, ::1] exps,
              const cnp.int64_t[::1] comp, int maxdeg, W):
    cdef cplx[:, ::1] Wv = np.ascontiguousarray(W, dtype=np.complex128)
    cdef Py_ssize_t M = Wv.shape[0], i
    out = np.empty((M, 3), dtype=np.complex128)
    cdef cplx[:, ::1] ov = out
    cdef cplx* pw = <cplx*> malloc(3 * (maxdeg + 1) * sizeof(cplx))
    try:
        with nogil:
            for i in range(M):
                _eval_one(coef, exps, comp, &Wv[i, 0], pw, maxdeg, &ov[i, 0])
    finally:
        free(pw)
    return out


def iterate(const cplx[::1] coef, const cnp.int64_t[:, ::1] exps,
            const cnp.int64_t[::1] comp, int maxdeg, W0, int nsteps, double eps):
    W = np.array(W0, dtype=np.complex128, order="C", copy=True)
    cdef cplx[:, ::1] Wv = W
    cdef Py_ssize_t M = Wv.shape[0], i
    logs = np.full((M, nsteps), np.nan)
    death = np.zeros(M, dtype=np.int64)
    cdef double[:, ::1] lv = logs
    cdef cnp.int64_t[::1] dv = death
    cdef int s
    cdef double n
    cdef cplx out[3]
    cdef cplx* pw = <cplx*> malloc(3 * (maxdeg + 1) * sizeof(cplx))
    try:
        with nogil:
            for i in range(M):
                for s in range(nsteps):
                    _eval_one(coef, exps, comp, &Wv[i, 0], pw, maxdeg, out)
                    n = sqrt(_abs2(out[0]) + _abs2(out[1]) + _abs2(out[2]))
                    if not (n >= eps):
                        dv[i] = s + 1
                        break
                    lv[i, s] = log(n)
                    Wv[i, 0] = out[0] / n
                    Wv[i, 1] = out[1] / n
                    Wv[i, 2] = out[2] / n
    finally:
        free(pw)
    return W, logs, death


def cluster_verdicts(const cplx[::1] coef, const cnp.int64_t[:, ::1] exps,
                     const cnp.int64_t[::1] comp, int maxdeg, C, int nsteps,
                     double eps, double cos_stab, double cos_blow):
    Cw = np.array(C, dtype=np.complex128, order="C", copy=True)
    cdef cplx[:, :, ::1] cv = Cw
    cdef Py_ssize_t M = cv.shape[0], K = cv.shape[1], i, a, b
    codes = np.full(M, UNRESOLVED, dtype=np.int8)
    maxdiam = np.zeros(M)
    event = np.zeros(M, dtype=np.int64)
    cdef cnp.int8_t[::1] codev = codes
    cdef double[::1] mdv = maxdiam
    cdef cnp.int64_t[::1] ev = event
    cdef int s, code
    cdef double n, minip, ip
    cdef cplx out[3]
    cdef cplx acc
    cdef cplx* pw = <cplx*> malloc(3 * (maxdeg + 1) * sizeof(cplx))
    try:
        with nogil:
            for i in range(M):
                minip = 1.0
                code = -1
                for s in range(1, nsteps + 1):
                    for a in range(K):
                        _eval_one(coef, exps, comp, &cv[i, a, 0], pw, maxdeg, out)
                        n = sqrt(_abs2(out[0]) + _abs2(out[1]) + _abs2(out[2]))
                        if not (n >= eps):
                            code = NEAR_IND
                            break
                        cv[i, a, 0] = out[0] / n
                        cv[i, a, 1] = out[1] / n
                        cv[i, a, 2] = out[2] / n
                    if code >= 0:
                        ev[i] = s
                        break
                    for a in range(K):
                        for b in range(a + 1, K):
                            acc = (cv[i, a, 0].conjugate() * cv[i, b, 0]
                                   + cv[i, a, 1].conjugate() * cv[i, b, 1]
                                   + cv[i, a, 2].conjugate() * cv[i, b, 2])
                            ip = sqrt(_abs2(acc))
                            if ip < minip:
                                minip = ip
                    if minip < cos_blow:
                        code = JULIA
                        ev[i] = s
                        break
                if code < 0:
                    code = FATOU if (nsteps >= 1 and minip > cos_stab) else UNRESOLVED
                codev[i] = code
                if minip > 1.0:
                    minip = 1.0
                mdv[i] = acos(minip)
    finally:
        free(pw)
    return codes, maxdiam, event
