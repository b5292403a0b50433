"""Counter-based, splittable random streams.

Every replicate ``i`` of a stream owns an independent SplitMix64 sequence
keyed by ``mix64(stream_key + (i + 1) * GOLDEN)``.  Draw ``c`` of that
replicate is ``mix64(replicate_key + (c + 1) * GOLDEN)``.  Nothing depends on
how replicates are partitioned across workers, which is what makes parallel
runs bit-for-bit reproducible.
"""
from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """SplitMix64 finalizer on a Python int (bijective on 64-bit words)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


class RandomStream:
    """Seeded stream of replicates.

    A stream is single-owner: each sampling call consumes a contiguous range
    of replicate indices and advances ``position``.  Use :meth:`split` to hand
    independent substreams to parallel consumers.
    """

    def __init__(self, seed: int, stream_id: int = 0, position: int = 0):
        if not (0 <= seed <= MASK64 and 0 <= stream_id <= MASK64):
            raise ValueError("seed and stream_id must be unsigned 64-bit integers")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        self.position = int(position)
        self.key = mix64(mix64(self.seed ^ 0x5851F42D4C957F2D) + (self.stream_id + 1) * GOLDEN)

    def __repr__(self):
        return f"RandomStream(seed={self.seed}, stream_id={self.stream_id}, position={self.position})"

    def split(self, index: int) -> RandomStream:
        """Child stream with a derived stream id; the parent is not advanced."""
        child = mix64((self.stream_id * GOLDEN + index + 1) & MASK64 ^ 0xD1B54A32D192ED03)
        return RandomStream(self.seed, child)

    def copy(self) -> RandomStream:
        return RandomStream(self.seed, self.stream_id, self.position)

    def take(self, m: int) -> int:
        """Reserve ``m`` replicate indices; returns the first one."""
        if m < 0:
            raise ValueError("m must be nonnegative")
        start = self.position
        self.position += m
        return start

    def uniforms(self, size: int) -> np.ndarray:
        """First uniform of each of the next ``size`` replicates, in (0, 1)."""
        from summax import _kernels

        start = self.take(size)
        keys = _kernels.replicate_keys(np.uint64(self.key), start, size)
        return _kernels.u01(keys, np.uint64(0))
