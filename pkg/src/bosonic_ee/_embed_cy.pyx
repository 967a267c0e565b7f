# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled embedding accumulation kernel.

For each intermediate state c the update is a weighted scatter of the k-body
matrix v into the many-body matrix:

    h[target[c,i], target[c,j]] += (amplitude[c,i] * v[i,j]) * amplitude[c,j]

Only entries with row >= col are written (callers mirror the lower
triangle), and the multiplication order above is fixed so the result is
bit-identical to the NumPy fallback.
"""

import numpy as np

cimport numpy as cnp

ctypedef fused scalar:
    double
    double complex


def accumulate_embedding(
    scalar[:, ::1] h,
    const double[:, ::1] amplitude,
    const cnp.int64_t[:, ::1] target,
    const scalar[:, ::1] v,
):
    cdef Py_ssize_t n_inter = target.shape[0]
    cdef Py_ssize_t dk = target.shape[1]
    cdef Py_ssize_t c, i, j
    cdef cnp.int64_t a, b
    for c in range(n_inter):
        for i in range(dk):
            a = target[c, i]
            for j in range(dk):
                b = target[c, j]
                if a >= b:
                    h[a, b] = h[a, b] + (amplitude[c, i] * v[i, j]) * amplitude[c, j]
