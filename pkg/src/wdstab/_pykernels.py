"""Pure-Python kernels.

Reference implementation of every routine in ``_ckernels.pyx``. The PRNG
routines produce bit-identical streams to the compiled version; the float
reductions agree to rounding.

PRNG state is always a length-4 ``numpy.uint64`` array, updated in place.
"""
import math
import sys

import numpy as np

NAME = "python"
_EPS = sys.float_info.epsilon

_MASK = 0xFFFFFFFFFFFFFFFF
_TWO_PI = 2.0 * math.pi
_INV_2_53 = 1.0 / 9007199254740992.0


def _rotl(x, k):
    return ((x << k) | (x >> (64 - k))) & _MASK


def _step(s0, s1, s2, s3):
    result = (_rotl((s1 * 5) & _MASK, 7) * 9) & _MASK
    t = (s1 << 17) & _MASK
    s2 ^= s0
    s3 ^= s1
    s1 ^= s2
    s0 ^= s3
    s2 ^= t
    s3 = _rotl(s3, 45)
    return result, s0, s1, s2, s3


def _load(state):
    return [int(v) for v in state]


def _store(state, s):
    state[:] = np.array(s, dtype=np.uint64)


def fill_u64(state, out):
    s0, s1, s2, s3 = _load(state)
    for i in range(out.shape[0]):
        r, s0, s1, s2, s3 = _step(s0, s1, s2, s3)
        out[i] = r
    _store(state, (s0, s1, s2, s3))


def fill_uniform(state, out):
    s0, s1, s2, s3 = _load(state)
    for i in range(out.shape[0]):
        r, s0, s1, s2, s3 = _step(s0, s1, s2, s3)
        out[i] = (r >> 11) * _INV_2_53
    _store(state, (s0, s1, s2, s3))


def fill_normal(state, out):
    """Box-Muller; each pair of outputs consumes two uniforms."""
    s0, s1, s2, s3 = _load(state)
    n = out.shape[0]
    for i in range(0, n, 2):
        r, s0, s1, s2, s3 = _step(s0, s1, s2, s3)
        u1 = 1.0 - (r >> 11) * _INV_2_53
        r, s0, s1, s2, s3 = _step(s0, s1, s2, s3)
        u2 = (r >> 11) * _INV_2_53
        rad = math.sqrt(-2.0 * math.log(u1))
        out[i] = rad * math.cos(_TWO_PI * u2)
        if i + 1 < n:
            out[i + 1] = rad * math.sin(_TWO_PI * u2)
    _store(state, (s0, s1, s2, s3))


def bounded(state, bound):
    """Uniform integer in ``[0, bound)`` for ``1 <= bound < 2**64``."""
    s = _load(state)
    threshold = ((1 << 64) - bound) % bound
    while True:
        r, *s = _step(*s)
        if r >= threshold:
            _store(state, s)
            return r % bound


def sample_combination(state, m, r, out):
    """Write ``r`` distinct sorted integers from ``range(m)`` into ``out``."""
    s = _load(state)
    pool = list(range(m))
    for i in range(r):
        bound = m - i
        threshold = ((1 << 64) - bound) % bound
        while True:
            x, *s = _step(*s)
            if x >= threshold:
                break
        j = i + x % bound
        pool[i], pool[j] = pool[j], pool[i]
    _store(state, s)
    out[:r] = sorted(pool[:r])


def boxcox_loglik_grid(x, lambdas, out):
    logs = np.log(x)
    n = logs.shape[0]
    sum_log = math.fsum(logs)
    for k in range(lambdas.shape[0]):
        lam = float(lambdas[k])
        y = logs if lam == 0.0 else np.expm1(lam * logs) / lam
        mean = float(y.mean())
        var = float(np.mean((y - mean) ** 2))
        # rounding noise around a constant column counts as zero spread
        if var <= (16.0 * _EPS * mean) ** 2:
            out[k] = -math.inf
        else:
            out[k] = -0.5 * n * math.log(var) + (lam - 1.0) * sum_log


def central_moments(x):
    """Return ``(mean, m2, m3, m4)`` with divisor n."""
    x = np.asarray(x, dtype=float)
    mean = float(x.mean())
    d = x - mean
    d2 = d * d
    return mean, float(d2.mean()), float((d2 * d).mean()), float((d2 * d2).mean())


def durbin_watson_sums(e):
    """Return ``(sum of squared first differences, sum of squares)``."""
    e = np.asarray(e, dtype=float)
    diff = np.diff(e)
    return float(diff @ diff), float(e @ e)
