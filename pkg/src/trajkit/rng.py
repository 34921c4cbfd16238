"""Bit-reproducible pseudo-randomness.

A SplitMix64 stage expands a 64-bit seed into the 256-bit state of a
xoshiro256** generator; Gaussians come from Box-Muller on that stream.
The exact construction is fixed so that every sampled quantity in this
package (quadratic simulations, width experiments, training runs) is
reproducible bit-for-bit from its integer seed.
"""

from __future__ import annotations

import math

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

_MASK = 0xFFFFFFFFFFFFFFFF
_TWO53_INV = 2.0 ** -53


def splitmix64_stream(seed: int, n: int) -> list[int]:
    """First ``n`` outputs of SplitMix64 started at ``seed``."""
    x = seed & _MASK
    out = []
    for _ in range(n):
        x = (x + 0x9E3779B97F4A7C15) & _MASK
        z = x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        out.append(z ^ (z >> 31))
    return out


def _fill_py(state: np.ndarray, out: np.ndarray) -> None:
    s0, s1, s2, s3 = (int(v) for v in state)
    for i in range(out.shape[0]):
        r = (s1 * 5) & _MASK
        r = ((r << 7) | (r >> 57)) & _MASK
        out[i] = (r * 9) & _MASK
        t = (s1 << 17) & _MASK
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) | (s3 >> 19)) & _MASK
    state[0] = s0
    state[1] = s1
    state[2] = s2
    state[3] = s3


if _HAVE_NUMBA:

    @njit(cache=True)
    def _fill_nb(state, out):  # pragma: no cover - compiled
        s0 = state[0]
        s1 = state[1]
        s2 = state[2]
        s3 = state[3]
        for i in range(out.shape[0]):
            r = np.uint64(s1 * np.uint64(5))
            r = (r << np.uint64(7)) | (r >> np.uint64(57))
            out[i] = r * np.uint64(9)
            t = s1 << np.uint64(17)
            s2 ^= s0
            s3 ^= s1
            s1 ^= s2
            s0 ^= s3
            s2 ^= t
            s3 = (s3 << np.uint64(45)) | (s3 >> np.uint64(19))
        state[0] = s0
        state[1] = s1
        state[2] = s2
        state[3] = s3


class Rng:
    """xoshiro256** stream seeded through SplitMix64."""

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._state = np.array(splitmix64_stream(seed, 4), dtype=np.uint64)

    @classmethod
    def from_state(cls, state) -> "Rng":
        rng = cls.__new__(cls)
        rng.seed = None
        rng._state = np.array(state, dtype=np.uint64)
        if rng._state.shape != (4,):
            raise ValueError("state must have 4 words")
        return rng

    def uint64(self, n: int) -> np.ndarray:
        out = np.empty(n, dtype=np.uint64)
        if _HAVE_NUMBA:
            _fill_nb(self._state, out)
        else:
            _fill_py(self._state, out)
        return out

    def next_uint64(self) -> int:
        return int(self.uint64(1)[0])

    def spawn(self) -> "Rng":
        """Child stream keyed off the next output of this one."""
        return Rng(self.next_uint64())

    def uniform(self, n: int) -> np.ndarray:
        """Uniforms in (0, 1]; the +1 keeps log() finite for Box-Muller."""
        bits = self.uint64(n) >> np.uint64(11)
        return (bits.astype(np.float64) + 1.0) * _TWO53_INV

    def gaussian(self, n: int) -> np.ndarray:
        pairs = (n + 1) // 2
        u1 = self.uniform(pairs)
        u2 = self.uniform(pairs)
        radius = np.sqrt(-2.0 * np.log(u1))
        angle = 2.0 * math.pi * u2
        z = np.empty(2 * pairs, dtype=np.float64)
        z[0::2] = radius * np.cos(angle)
        z[1::2] = radius * np.sin(angle)
        return z[:n]

    def rademacher(self, n: int) -> np.ndarray:
        """Uniform +/-1 from the low bit of the stream."""
        bits = self.uint64(n) & np.uint64(1)
        return bits.astype(np.float64) * 2.0 - 1.0

    def below(self, n: int) -> int:
        """Unbiased integer in [0, n) by rejection."""
        if n <= 0:
            raise ValueError("n must be positive")
        bound = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_uint64()
            if x < bound:
                return x % n

    def shuffle(self, items) -> None:
        """In-place Fisher-Yates."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def orthogonal(self, d: int) -> np.ndarray:
        """Random orthogonal d x d matrix via modified Gram-Schmidt."""
        a = self.gaussian(d * d).reshape(d, d)
        q = np.empty_like(a)
        for j in range(d):
            v = a[:, j].copy()
            for i in range(j):
                v -= np.dot(q[:, i], v) * q[:, i]
            nv = np.linalg.norm(v)
            if nv < 1e-12:
                raise ValueError("degenerate Gram-Schmidt column")
            q[:, j] = v / nv
        return q
