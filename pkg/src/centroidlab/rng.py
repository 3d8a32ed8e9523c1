"""Counter-seeded reproducible random streams.

A stream is addressed by (master_seed, stream_index); the pair is hashed
through SplitMix64 into a xoshiro256++ state, so distinct pairs give
statistically independent sequences and equal pairs reproduce bit-for-bit.
Monte Carlo trial i uses stream_index = i, which makes results independent
of how trials are partitioned across threads.

The pure-Python generator here and the numba kernels in ``_kernels`` run the
same integer algorithm and therefore produce identical sequences.
"""

from __future__ import annotations

__all__ = ["RngStream", "seed_state"]

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _splitmix64(state: int) -> tuple[int, int]:
    state = (state + _GOLDEN) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    z ^= z >> 31
    return state, z


def _mix64(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 33)) * 0xFF51AFD7ED558CCD) & _MASK
    z = ((z ^ (z >> 33)) * 0xC4CEB9FE1A85EC53) & _MASK
    return z ^ (z >> 33)


def seed_state(master_seed: int, stream_index: int) -> tuple[int, int, int, int]:
    """Derive the 4-word xoshiro256++ state for a (seed, index) pair."""
    sm = _mix64(master_seed & _MASK) ^ _mix64((stream_index & _MASK) ^ 0xD6E8FEB86659FD93)
    sm, s0 = _splitmix64(sm)
    sm, s1 = _splitmix64(sm)
    sm, s2 = _splitmix64(sm)
    sm, s3 = _splitmix64(sm)
    if s0 == s1 == s2 == s3 == 0:
        s0 = _GOLDEN
    return s0, s1, s2, s3


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK


class RngStream:
    """One reproducible stream of uniform deviates."""

    __slots__ = ("master_seed", "stream_index", "_s")

    def __init__(self, master_seed: int, stream_index: int = 0):
        self.master_seed = int(master_seed)
        self.stream_index = int(stream_index)
        self._s = list(seed_state(self.master_seed, self.stream_index))

    def spawn(self, stream_index: int) -> "RngStream":
        """Fresh stream with the same master seed and a new index."""
        return RngStream(self.master_seed, stream_index)

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s
        result = (_rotl((s0 + s3) & _MASK, 23) + s0) & _MASK
        t = (s1 << 17) & _MASK
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s = [s0, s1, s2, s3]
        return result

    def next_double(self) -> float:
        # 53 uniform bits -> [0, 1)
        return (self.next_u64() >> 11) * 2.0 ** -53

    def state(self) -> tuple[int, int, int, int]:
        return tuple(self._s)

    def __repr__(self) -> str:
        return f"RngStream(master_seed={self.master_seed}, stream_index={self.stream_index})"
