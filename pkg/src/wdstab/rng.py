"""Seeded xoshiro256** generator.

The generator is fully specified so that streams can be reproduced in any
language: the 256-bit state is filled from the integer seed with four
successive splitmix64 outputs, doubles are ``(u64 >> 11) * 2**-53``, and
normal deviates come from the Box-Muller transform with ``u1 = 1 - U`` and
``u2 = U``, emitted as ``(r cos, r sin)`` pairs. A call for an odd count
discards the last sine.
"""
import numpy as np

from ._backend import kernels as _default_kernels

_MASK = 0xFFFFFFFFFFFFFFFF


def splitmix64(x):
    """Advance a splitmix64 state; return ``(new_state, output)``."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return x, z ^ (z >> 31)


class Xoshiro256:
    """xoshiro256** stream.

    Parameters
    ----------
    seed : int
        Non-negative integer below ``2**64``.
    kernels : module, optional
        Kernel backend; defaults to the one chosen at import.
    """

    def __init__(self, seed, kernels=None):
        seed = int(seed)
        if not 0 <= seed <= _MASK:
            raise ValueError(f"seed must be in [0, 2**64), got {seed}")
        self.seed = seed
        self._k = kernels or _default_kernels
        words = []
        x = seed
        for _ in range(4):
            x, z = splitmix64(x)
            words.append(z)
        self.state = np.array(words, dtype=np.uint64)

    @classmethod
    def from_state(cls, words, kernels=None):
        if len(words) != 4 or not any(words):
            raise ValueError("state must be four words, not all zero")
        rng = cls(0, kernels)
        rng.state = np.array([int(w) & _MASK for w in words], dtype=np.uint64)
        return rng

    def next_u64(self):
        out = np.empty(1, dtype=np.uint64)
        self._k.fill_u64(self.state, out)
        return int(out[0])

    def u64(self, size):
        out = np.empty(size, dtype=np.uint64)
        self._k.fill_u64(self.state, out)
        return out

    def uniform(self, size):
        out = np.empty(size, dtype=np.float64)
        self._k.fill_uniform(self.state, out)
        return out

    def normal(self, size):
        out = np.empty(size, dtype=np.float64)
        self._k.fill_normal(self.state, out)
        return out

    def below(self, bound):
        """Uniform integer in ``[0, bound)``; any positive ``bound``."""
        bound = int(bound)
        if bound < 1:
            raise ValueError("bound must be positive")
        if bound <= _MASK:
            return int(self._k.bounded(self.state, bound))
        # wider than one word: rejection on whole-word draws masked to bit length
        bits = bound.bit_length()
        words = -(-bits // 64)
        while True:
            value = 0
            for w in self.u64(words):
                value = (value << 64) | int(w)
            value &= (1 << bits) - 1
            if value < bound:
                return value

    def combination(self, m, r):
        """Sorted tuple of ``r`` distinct integers drawn uniformly from ``range(m)``."""
        if not 0 <= r <= m:
            raise ValueError(f"cannot choose {r} of {m}")
        out = np.empty(r, dtype=np.int64)
        if r:
            self._k.sample_combination(self.state, m, r, out)
        return tuple(int(v) for v in out)
