"""Deterministic 64-bit random streams.

The generator is splitmix64 with the standard constants; it is specified
here explicitly (rather than delegating to ``random``) so that any other
implementation of the trace/dataset formats can reproduce identical bytes
from the same seed:

    state    <- (state + 0x9E3779B97F4A7C15) mod 2^64
    z        <- state
    z        <- (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2^64
    z        <- (z ^ (z >> 27)) * 0x94D049BB133111EB mod 2^64
    output   <- z ^ (z >> 31)

Uniform doubles take the top 53 bits: ``(output >> 11) * 2^-53``.
Gaussians use the Box-Muller transform and always consume exactly two
draws, so streams never depend on call history beyond the draw count.

Sub-streams are derived by folding integer path components into the seed,
one mix per component, which keeps dataset generation reproducible per
(entity, variable) regardless of generation order.
"""

from __future__ import annotations

import math

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


class SplitMix64:
    """Stateful splitmix64 stream."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK
        return mix64(self.state)

    def uniform(self) -> float:
        """Uniform double in [0, 1)."""
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def gauss(self, std: float = 1.0) -> float:
        """Zero-mean Gaussian; consumes exactly two uniforms."""
        u1 = self.uniform()
        u2 = self.uniform()
        if u1 <= 0.0:
            u1 = 2.0 ** -53
        return std * math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


def substream(seed: int, *path: int) -> SplitMix64:
    """Independent stream for an integer path under a root seed."""
    s = seed & _MASK
    for p in path:
        s = mix64((s + _GAMMA * ((p & _MASK) + 1)) & _MASK)
    return SplitMix64(s)
