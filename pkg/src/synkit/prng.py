"""Deterministic 64-bit xorshift* generator.

The simulator's random transition policy and the stimulus generators use
this exact algorithm so runs reproduce bit-for-bit from a seed alone:

    state(0) = seed if seed != 0 else 0x9E3779B97F4A7C15
    state    = state XOR (state >> 12)
    state    = state XOR (state << 25)   (mod 2^64)
    state    = state XOR (state >> 27)
    output   = state * 0x2545F4914F6CDD1D  (mod 2^64)

Bounded draws use plain modulo: pick(n) = next() mod n.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_MULT = 0x2545F4914F6CDD1D
_ZERO_SEED = 0x9E3779B97F4A7C15


class XorShift64Star:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = (seed & _MASK) or _ZERO_SEED

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x = (x ^ (x << 25)) & _MASK
        x ^= x >> 27
        self.state = x
        return (x * _MULT) & _MASK

    def pick(self, n: int) -> int:
        """Uniform-ish index in [0, n); n must be positive."""
        return self.next_u64() % n

    def choice(self, seq):
        return seq[self.pick(len(seq))]

    def chance(self, num: int, den: int) -> bool:
        return self.pick(den) < num
