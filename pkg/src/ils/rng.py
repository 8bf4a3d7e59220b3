"""Seeded random streams that can be reproduced bit for bit elsewhere.

Generator: SplitMix64 (period 2^64).  Each draw advances the 64-bit state by
0x9E3779B97F4A7C15 and mixes it:
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9  mod 2^64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB  mod 2^64
    out = z ^ (z >> 31)
Uniform on [0, 1): (out >> 11) * 2^-53.
Normal: Box-Muller on two uniforms u1, u2 with u1 replaced by 1 - u1 so the
log argument lies in (0, 1]; r = sqrt(-2 ln u1), returns r cos(2 pi u2) and
caches r sin(2 pi u2) for the next call.
Integer on [lo, hi]: lo + floor(u * (hi - lo + 1)).
"""
import hashlib
import math

import numpy as np

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed: int):
        self.state = int(seed) & MASK
        self._spare = None

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / 9007199254740992.0)

    def gaussian(self) -> float:
        if self._spare is not None:
            g, self._spare = self._spare, None
            return g
        u1 = 1.0 - self.uniform()
        u2 = self.uniform()
        r = math.sqrt(-2.0 * math.log(u1))
        t = 2.0 * math.pi * u2
        self._spare = r * math.sin(t)
        return r * math.cos(t)

    def integer(self, lo: int, hi: int) -> int:
        return lo + int(self.uniform() * (hi - lo + 1))

    # array helpers, filled in row-major order
    def normal_array(self, *shape) -> np.ndarray:
        size = int(np.prod(shape))
        return np.array([self.gaussian() for _ in range(size)]).reshape(shape)

    def uniform_array(self, *shape) -> np.ndarray:
        size = int(np.prod(shape))
        return np.array([self.uniform() for _ in range(size)]).reshape(shape)


def seeded_rng(seed: int) -> SplitMix64:
    return SplitMix64(seed)


def gaussian(gen: SplitMix64) -> float:
    return gen.gaussian()


def derive_seed(seed: int, *parts) -> int:
    """64-bit stream seed for one instance, from blake2b over the key parts."""
    key = ":".join(str(p) for p in (seed,) + parts).encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little")
