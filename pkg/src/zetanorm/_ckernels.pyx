# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: nested MZV partial sums and norm-moment sampling."""

import numpy as np
cimport numpy as cnp
from libc.math cimport pow, fabs
from libc.stdint cimport uint64_t, int64_t

cnp.import_array()

cdef uint64_t _GOLDEN = 0x9E3779B97F4A7C15ULL


cdef inline uint64_t _mix(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline double _uniform(uint64_t key, uint64_t ctr) nogil:
    cdef uint64_t z = _mix(key + _GOLDEN * (ctr + 1))
    return ((z >> 11) + 0.5) * (1.0 / 9007199254740992.0)


def nested_sums(args, bint bar_first, Py_ssize_t n_terms, Py_ssize_t n_tail):
    """Suffix values ``zeta_N(args[i:])`` and the last outer partial sums.

    Returns ``(suffix, tail)`` where ``suffix[i]`` is the truncated nested sum
    of ``args[i:]`` at ``N = n_terms`` (the leading sign included for
    ``i = 0``) and ``tail[j]`` is the outer partial sum at ``N - n_tail + j``.
    Each level keeps a Neumaier-compensated running sum.
    """
    cdef cnp.ndarray[cnp.int64_t, ndim=1] a = np.ascontiguousarray(args, dtype=np.int64)
    cdef Py_ssize_t k = a.shape[0]
    if k == 0:
        raise ValueError("empty index")
    if n_tail >= n_terms:
        raise ValueError("n_tail must be smaller than n_terms")
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sums = np.zeros(k + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] comp = np.zeros(k + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] tail = np.zeros(n_tail + 1)
    cdef double[::1] s = sums
    cdef double[::1] c = comp
    cdef double[::1] t = tail
    cdef int64_t[::1] av = a
    cdef Py_ssize_t n, i, e
    cdef int64_t amax = 0
    for i in range(k):
        if av[i] > amax:
            amax = av[i]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] powers = np.ones(amax + 1)
    cdef double[::1] ip = powers
    cdef double inv, x, y, old_inner
    cdef Py_ssize_t first_tail = n_terms - n_tail
    s[k] = 1.0
    with nogil:
        for n in range(1, n_terms + 1):
            inv = 1.0 / <double>n
            for e in range(1, amax + 1):
                ip[e] = ip[e - 1] * inv
            # outer level first: it needs the inner value at n - 1
            for i in range(k):
                old_inner = s[i + 1] + c[i + 1]
                if old_inner == 0.0:
                    continue
                x = old_inner * ip[av[i]]
                if i == 0 and bar_first and (n & 1):
                    x = -x
                y = s[i] + x
                if fabs(s[i]) >= fabs(x):
                    c[i] += (s[i] - y) + x
                else:
                    c[i] += (x - y) + s[i]
                s[i] = y
            if n >= first_tail:
                t[n - first_tail] = s[0] + c[0]
    suffix = np.array([sums[i] + comp[i] for i in range(k)])
    return suffix, tail


def norm_moment_block(uint64_t seed, int64_t start, int64_t count, int r, double n, double s):
    """Sum and sum of squares of ``||U||_n^s`` over samples ``start .. start+count-1``.

    Coordinate ``j`` of sample ``i`` is a pure function of ``(seed, i*r + j)``.
    """
    cdef uint64_t key = _mix(seed)
    cdef int64_t i
    cdef int j
    cdef double u, m, acc, z, v, total = 0.0, total_sq = 0.0
    cdef double inv_n = 1.0 / n
    cdef double buf[64]
    if r < 1 or r > 64:
        raise ValueError("r must lie in 1..64")
    with nogil:
        for i in range(start, start + count):
            m = 0.0
            for j in range(r):
                u = _uniform(key, <uint64_t>(i * r + j))
                buf[j] = u
                if u > m:
                    m = u
            acc = 0.0
            for j in range(r):
                # the maximal coordinate contributes exactly 1
                acc += 1.0 if buf[j] == m else pow(buf[j] / m, n)
            z = m * pow(acc, inv_n)
            v = z if s == 1.0 else pow(z, s)
            total += v
            total_sq += v * v
    return total, total_sq


def uniforms(uint64_t seed, int64_t start, int64_t count):
    """Raw counter-based uniforms for counters ``start .. start+count-1``."""
    cdef uint64_t key = _mix(seed)
    out = np.empty(count)
    cdef double[::1] o = out
    cdef int64_t i
    with nogil:
        for i in range(count):
            o[i] = _uniform(key, <uint64_t>(start + i))
    return out
