# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled scoring kernels; contract-identical to _kernels_ref."""

import numpy as np

cimport numpy as cnp
from libc.math cimport log, sqrt

from .errors import ZeroVector

cnp.import_array()

cdef double LOG_2PI = log(2.0 * 3.14159265358979323846)


cdef double _dot(const double[::1] a, const double[::1] b) nogil:
    cdef Py_ssize_t l
    cdef double acc = 0.0
    for l in range(a.shape[0]):
        acc += a[l] * b[l]
    return acc


def cosine_scores(query, database):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] q = np.ascontiguousarray(query, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] db = np.ascontiguousarray(database, dtype=np.float64)
    cdef Py_ssize_t K = db.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(K, dtype=np.float64)
    cdef double qn = sqrt(_dot(q, q))
    if qn == 0.0:
        raise ZeroVector("query descriptor has zero norm")
    cdef Py_ssize_t k
    cdef double dn
    for k in range(K):
        dn = sqrt(_dot(db[k], db[k]))
        if dn == 0.0:
            raise ZeroVector("database descriptor has zero norm")
        out[k] = _dot(db[k], q) / (dn * qn)
    return out


def mls_scores(q_mean, q_var, db_mean, db_var, bint literal=False):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] qm = np.ascontiguousarray(q_mean, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] qv = np.ascontiguousarray(q_var, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] dm = np.ascontiguousarray(db_mean, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] dv = np.ascontiguousarray(db_var, dtype=np.float64)
    cdef Py_ssize_t K = dm.shape[0]
    cdef Py_ssize_t L = qm.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(K, dtype=np.float64)
    cdef Py_ssize_t k, l
    cdef double acc, sv, d
    for k in range(K):
        acc = 0.0
        for l in range(L):
            sv = dv[k, l] + qv[l]
            if literal:
                d = dm[k, l] + qm[l]
            else:
                d = dm[k, l] - qm[l]
            acc += d * d / sv + log(sv)
        out[k] = -0.5 * acc - 0.5 * L * LOG_2PI
    return out


def member_score_stats(q_members, db_members):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] qm = np.ascontiguousarray(q_members, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=3] dm = np.ascontiguousarray(db_members, dtype=np.float64)
    cdef Py_ssize_t M = qm.shape[0]
    cdef Py_ssize_t K = dm.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] scores = np.empty((M, K), dtype=np.float64)
    cdef Py_ssize_t m, k
    cdef double qn, dn
    for m in range(M):
        qn = sqrt(_dot(qm[m], qm[m]))
        if qn == 0.0:
            raise ZeroVector("query descriptor has zero norm")
        for k in range(K):
            dn = sqrt(_dot(dm[m, k], dm[m, k]))
            if dn == 0.0:
                raise ZeroVector("database descriptor has zero norm")
            scores[m, k] = _dot(dm[m, k], qm[m]) / (dn * qn)
    mean = np.mean(scores, axis=0)
    var = np.mean((scores - mean) ** 2, axis=0)
    return mean, var
