# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops. Must agree bit-for-bit with ``_pykernels``."""

from libc.stdint cimport uint64_t, int64_t

import numpy as np

cdef extern from *:
    int __builtin_parityll(unsigned long long) nogil

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef uint64_t STRIDE = 8


cdef inline uint64_t _mix(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


def scan_bounds(const uint64_t[::1] masks, uint64_t start, uint64_t stop):
    """Return ``(min, argmin, max, argmax)`` of the term-product sum over
    assignment indices in ``[start, stop)``. Ties resolve to the lowest index."""
    cdef Py_ssize_t nterms = masks.shape[0]
    cdef Py_ssize_t t
    cdef uint64_t idx, argmin = start, argmax = start
    cdef int64_t odd, value
    cdef int64_t vmin = nterms + 1, vmax = -nterms - 1
    if stop <= start:
        raise ValueError("empty assignment range")
    with nogil:
        idx = start
        while idx < stop:
            odd = 0
            for t in range(nterms):
                odd += __builtin_parityll(idx & masks[t])
            value = nterms - 2 * odd
            if value < vmin:
                vmin = value
                argmin = idx
            if value > vmax:
                vmax = value
                argmax = idx
            idx += 1
    return int(vmin), int(argmin), int(vmax), int(argmax)


def counter_uniforms(uint64_t seed, const uint64_t[::1] trials, uint64_t draw):
    """Uniform doubles in [0, 1) keyed by ``(seed, trial, draw)``."""
    cdef Py_ssize_t n = trials.shape[0]
    cdef Py_ssize_t i
    cdef uint64_t key = _mix(seed + GOLDEN)
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] view = out
    with nogil:
        for i in range(n):
            view[i] = (_mix(key + GOLDEN * (trials[i] * STRIDE + draw + 1)) >> 11) * (1.0 / 9007199254740992.0)
    return out
