"""SplitMix64 stream and derived samplers.

Every random quantity in the package (S coefficients, relabelings, encoder
weights, projection matrices) is drawn from this generator so results are
reproducible bit-for-bit from an integer seed.
"""

from __future__ import annotations

import numpy as np

GOLDEN = 0x9E3779B97F4A7C15
MASK64 = 0xFFFFFFFFFFFFFFFF
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def derive_seed(master: int, *keys: int) -> int:
    """Child seed for a tuple of integer keys, e.g. (pair_index, seed_index)."""
    state = mix64(master + GOLDEN)
    for k in keys:
        state = mix64(state ^ mix64((k & MASK64) + GOLDEN))
    return state


class SplitMix64:
    """Counter-based SplitMix64; output i is mix64(seed + (i+1)*GOLDEN)."""

    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self.counter = 0

    def next_u64(self) -> int:
        self.counter += 1
        return mix64(self.seed + self.counter * GOLDEN)

    def u64_array(self, size: int) -> np.ndarray:
        idx = np.arange(self.counter + 1, self.counter + 1 + size, dtype=np.uint64)
        self.counter += size
        with np.errstate(over="ignore"):
            z = np.uint64(self.seed) + idx * np.uint64(GOLDEN)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
            z = z ^ (z >> np.uint64(31))
        return z

    def random(self, size: int) -> np.ndarray:
        """Uniform doubles in [0, 1) from the top 53 bits."""
        return (self.u64_array(size) >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def uniform(self, low: float, high: float, size: int) -> np.ndarray:
        return low + (high - low) * self.random(size)

    def normal(self, size: int) -> np.ndarray:
        """Standard normals by Box-Muller; each uniform pair yields (cos, sin) outputs."""
        m = (size + 1) // 2
        u = self.random(2 * m)
        u1 = 1.0 - u[0::2]  # (0, 1]
        u2 = u[1::2]
        r = np.sqrt(-2.0 * np.log(u1))
        out = np.empty(2 * m)
        out[0::2] = r * np.cos(2.0 * np.pi * u2)
        out[1::2] = r * np.sin(2.0 * np.pi * u2)
        return out[:size]

    def permutation(self, n: int) -> np.ndarray:
        """Uniform random permutation (Fisher-Yates with 64-bit draws)."""
        perm = np.arange(n)
        for i in range(n - 1, 0, -1):
            j = self.next_u64() % (i + 1)
            perm[i], perm[j] = perm[j], perm[i]
        return perm
