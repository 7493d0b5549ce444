# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. Mirrors ``_pykernels`` operation for operation."""

import numpy as np
cimport numpy as cnp
from libc.math cimport log2, INFINITY
from libc.stdlib cimport malloc, free

cnp.import_array()


cdef inline double _entropy(long long *counts, int n_classes, long long total) noexcept nogil:
    cdef double h = 0.0, p
    cdef int c
    if total == 0:
        return 0.0
    for c in range(n_classes):
        if counts[c] > 0:
            p = <double>counts[c] / <double>total
            h -= p * log2(p)
    return h


cdef struct Best:
    Py_ssize_t feature
    double threshold
    double ratio
    double gain


cdef inline void _consider(Best *best, Py_ssize_t f, double a, double b,
                           long long *node, long long *left, long long *right,
                           int n_classes, long long n, long long n_left,
                           double hp, long long min_leaf, double gain_eps) noexcept nogil:
    cdef long long n_right = n - n_left
    cdef double pl, pr, rem, gain, si, ratio, t
    cdef int c
    if n_left < min_leaf or n_right < min_leaf:
        return
    for c in range(n_classes):
        right[c] = node[c] - left[c]
    pl = <double>n_left / <double>n
    pr = <double>n_right / <double>n
    rem = pl * _entropy(left, n_classes, n_left)
    rem += pr * _entropy(right, n_classes, n_right)
    gain = hp - rem
    if not gain > gain_eps:
        return
    si = 0.0
    si -= pl * log2(pl)
    si -= pr * log2(pr)
    ratio = gain / si
    if ratio > best.ratio:
        t = 0.5 * (a + b)
        if t >= b:
            t = a
        best.feature = f
        best.threshold = t
        best.ratio = ratio
        best.gain = gain


def best_split_scan(const cnp.int64_t[::1] colptr, const cnp.int64_t[::1] rows,
                    const double[::1] vals, const cnp.int32_t[::1] labels,
                    node_counts, long long min_leaf, double gain_eps):
    cdef int n_classes = len(node_counts)
    cdef long long *node = <long long *>malloc(n_classes * sizeof(long long))
    cdef long long *left = <long long *>malloc(n_classes * sizeof(long long))
    cdef long long *right = <long long *>malloc(n_classes * sizeof(long long))
    cdef Py_ssize_t n_features = colptr.shape[0] - 1
    cdef Py_ssize_t f, k, s, e
    cdef long long n = 0, n_left
    cdef int c
    cdef double hp
    cdef Best best
    best.feature = -1
    best.threshold = 0.0
    best.ratio = -INFINITY
    best.gain = 0.0
    if node == NULL or left == NULL or right == NULL:
        free(node); free(left); free(right)
        raise MemoryError()
    try:
        for c in range(n_classes):
            node[c] = node_counts[c]
            n += node[c]
        with nogil:
            hp = _entropy(node, n_classes, n)
            for f in range(n_features):
                s = colptr[f]
                e = colptr[f + 1]
                if s == e:
                    continue
                for c in range(n_classes):
                    left[c] = node[c]
                for k in range(s, e):
                    left[labels[rows[k]]] -= 1
                n_left = n - (e - s)
                if n_left > 0:
                    _consider(&best, f, 0.0, vals[s], node, left, right,
                              n_classes, n, n_left, hp, min_leaf, gain_eps)
                for k in range(s, e):
                    left[labels[rows[k]]] += 1
                    n_left += 1
                    if k + 1 < e and vals[k + 1] != vals[k]:
                        _consider(&best, f, vals[k], vals[k + 1], node, left, right,
                                  n_classes, n, n_left, hp, min_leaf, gain_eps)
    finally:
        free(node); free(left); free(right)
    return best.feature, best.threshold, best.ratio, best.gain


def nb_scores(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices,
              const double[::1] values, const double[::1] log_priors,
              const double[:, ::1] log_lik):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t n_classes = log_priors.shape[0]
    cdef Py_ssize_t i, c, k
    cdef double acc
    out = np.empty((n, n_classes))
    cdef double[:, ::1] o = out
    with nogil:
        for i in range(n):
            for c in range(n_classes):
                acc = 0.0
                for k in range(indptr[i], indptr[i + 1]):
                    acc = acc + values[k] * log_lik[c, indices[k]]
                o[i, c] = log_priors[c] + acc
    return out
