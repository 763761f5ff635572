# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contracts as ``wdstab._pykernels``."""
from libc.float cimport DBL_EPSILON
from libc.math cimport INFINITY, cos, expm1, log, sin, sqrt
from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport free, malloc

NAME = "cython"

cdef double TWO_PI = 6.283185307179586
cdef double INV_2_53 = 1.0 / 9007199254740992.0


cdef inline uint64_t rotl(uint64_t x, int k) noexcept nogil:
    return (x << k) | (x >> (64 - k))


cdef inline uint64_t next_u64(uint64_t* s) noexcept nogil:
    cdef uint64_t result = rotl(s[1] * 5, 7) * 9
    cdef uint64_t t = s[1] << 17
    s[2] ^= s[0]
    s[3] ^= s[1]
    s[1] ^= s[2]
    s[0] ^= s[3]
    s[2] ^= t
    s[3] = rotl(s[3], 45)
    return result


cdef inline uint64_t next_below(uint64_t* s, uint64_t bound) noexcept nogil:
    # (2**64 - bound) % bound, computed in wrapping arithmetic
    cdef uint64_t threshold = (<uint64_t>0 - bound) % bound
    cdef uint64_t r
    while True:
        r = next_u64(s)
        if r >= threshold:
            return r % bound


def fill_u64(uint64_t[::1] state, uint64_t[::1] out):
    cdef Py_ssize_t i
    with nogil:
        for i in range(out.shape[0]):
            out[i] = next_u64(&state[0])


def fill_uniform(uint64_t[::1] state, double[::1] out):
    cdef Py_ssize_t i
    with nogil:
        for i in range(out.shape[0]):
            out[i] = (next_u64(&state[0]) >> 11) * INV_2_53


def fill_normal(uint64_t[::1] state, double[::1] out):
    cdef Py_ssize_t i, n = out.shape[0]
    cdef double u1, u2, rad
    with nogil:
        for i in range(0, n, 2):
            u1 = 1.0 - (next_u64(&state[0]) >> 11) * INV_2_53
            u2 = (next_u64(&state[0]) >> 11) * INV_2_53
            rad = sqrt(-2.0 * log(u1))
            out[i] = rad * cos(TWO_PI * u2)
            if i + 1 < n:
                out[i + 1] = rad * sin(TWO_PI * u2)


def bounded(uint64_t[::1] state, uint64_t bound):
    return next_below(&state[0], bound)


def sample_combination(uint64_t[::1] state, Py_ssize_t m, Py_ssize_t r, int64_t[::1] out):
    cdef int64_t* pool = <int64_t*> malloc(m * sizeof(int64_t))
    cdef Py_ssize_t i, j, k
    cdef int64_t tmp
    if pool == NULL:
        raise MemoryError()
    try:
        with nogil:
            for i in range(m):
                pool[i] = i
            for i in range(r):
                j = i + <Py_ssize_t> next_below(&state[0], <uint64_t>(m - i))
                tmp = pool[i]
                pool[i] = pool[j]
                pool[j] = tmp
            # insertion sort; r is small
            for i in range(1, r):
                tmp = pool[i]
                k = i - 1
                while k >= 0 and pool[k] > tmp:
                    pool[k + 1] = pool[k]
                    k -= 1
                pool[k + 1] = tmp
            for i in range(r):
                out[i] = pool[i]
    finally:
        free(pool)


def boxcox_loglik_grid(double[::1] x, double[::1] lambdas, double[::1] out):
    cdef Py_ssize_t n = x.shape[0], i, k
    cdef double* logs = <double*> malloc(n * sizeof(double))
    cdef double* y = <double*> malloc(n * sizeof(double))
    cdef double sum_log = 0.0, lam, mean, var, d
    if logs == NULL or y == NULL:
        free(logs)
        free(y)
        raise MemoryError()
    try:
        with nogil:
            for i in range(n):
                logs[i] = log(x[i])
                sum_log += logs[i]
            for k in range(lambdas.shape[0]):
                lam = lambdas[k]
                mean = 0.0
                if lam == 0.0:
                    for i in range(n):
                        y[i] = logs[i]
                        mean += y[i]
                else:
                    for i in range(n):
                        y[i] = expm1(lam * logs[i]) / lam
                        mean += y[i]
                mean /= n
                var = 0.0
                for i in range(n):
                    d = y[i] - mean
                    var += d * d
                var /= n
                # rounding noise around a constant column counts as zero spread
                if var <= (16.0 * DBL_EPSILON * mean) * (16.0 * DBL_EPSILON * mean):
                    out[k] = -INFINITY
                else:
                    out[k] = -0.5 * n * log(var) + (lam - 1.0) * sum_log
    finally:
        free(logs)
        free(y)


def central_moments(double[::1] x):
    cdef Py_ssize_t n = x.shape[0], i
    cdef double mean = 0.0, d, d2, m2 = 0.0, m3 = 0.0, m4 = 0.0
    with nogil:
        for i in range(n):
            mean += x[i]
        mean /= n
        for i in range(n):
            d = x[i] - mean
            d2 = d * d
            m2 += d2
            m3 += d2 * d
            m4 += d2 * d2
    return mean, m2 / n, m3 / n, m4 / n


def durbin_watson_sums(double[::1] e):
    cdef Py_ssize_t n = e.shape[0], i
    cdef double num = 0.0, den = 0.0, d
    with nogil:
        for i in range(n):
            den += e[i] * e[i]
        for i in range(1, n):
            d = e[i] - e[i - 1]
            num += d * d
    return num, den
