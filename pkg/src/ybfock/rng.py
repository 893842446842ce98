"""Reproducible random instances.

The generator is SplitMix64 (Steele, Lea, Flood 2014):

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    out = z ^ (z >> 31)

all arithmetic mod 2**64.  A double in ``[0, 1)`` is ``(out >> 11) * 2**-53``.
Complex entries draw the real part first, then the imaginary part, each
uniform in ``[-1, 1)``; arrays fill in C order.  This is enough to regenerate
every test vector in another language.
"""

from __future__ import annotations

import numpy as np

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed: int):
        self.state = int(seed) & MASK

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def uniform(self, size=None, low: float = -1.0, high: float = 1.0):
        if size is None:
            return low + (high - low) * ((self.next_u64() >> 11) * 2.0**-53)
        count = int(np.prod(size))
        vals = np.array([(self.next_u64() >> 11) for _ in range(count)], dtype=np.float64) * 2.0**-53
        return (low + (high - low) * vals).reshape(size)

    def complex(self, size) -> np.ndarray:
        count = int(np.prod(size))
        flat = self.uniform(2 * count).reshape(count, 2)
        return (flat[:, 0] + 1j * flat[:, 1]).reshape(size)

    def real(self, size) -> np.ndarray:
        return self.uniform(size).astype(complex)

    def unit(self, n: int, gram=None, real: bool = False) -> np.ndarray:
        """A random vector normalized in ``gram`` (identity by default)."""
        v = self.real(n) if real else self.complex(n)
        G = np.eye(n) if gram is None else gram
        return v / np.sqrt(np.vdot(v, G @ v).real)

    def spawn(self, tag: int) -> "SplitMix64":
        """An independent stream keyed by ``tag``, stable across runs."""
        return SplitMix64(self.next_u64() ^ (int(tag) * GOLDEN & MASK))
