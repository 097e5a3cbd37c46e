"""Keyed +/-1 carrier sequences from a pinned xorshift64* stream.

The stream is part of the cross-implementation contract: the same seed
must produce the same sequences everywhere, so no platform RNG is used.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["XorShift64Star", "PnPair", "generate_pn_pair", "parse_key"]

MASK64 = (1 << 64) - 1
SEED_SALT = 0x9E3779B97F4A7C15
MULTIPLIER = 0x2545F4914F6CDD1D
_INV_2_53 = 1.0 / (1 << 53)


class XorShift64Star:
    """xorshift64* generator (shifts 12, 25, 27)."""

    def __init__(self, seed: int):
        state = (int(seed) & MASK64) ^ SEED_SALT
        # an all-zero state is a fixed point of the recurrence
        self.state = state or SEED_SALT

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * MULTIPLIER) & MASK64

    def signs(self, n: int) -> np.ndarray:
        """``n`` values in {-1, +1}: +1 when the output's top bit is clear."""
        return np.array(
            [-1.0 if self.next_u64() >> 63 else 1.0 for _ in range(n)], dtype=np.float64
        )

    def uniform(self, n: int) -> np.ndarray:
        """``n`` doubles in [0, 1) from the top 53 bits of each output."""
        x = self.state
        out = np.empty(n, dtype=np.float64)
        for i in range(n):
            x ^= x >> 12
            x ^= (x << 25) & MASK64
            x ^= x >> 27
            out[i] = (((x * MULTIPLIER) & MASK64) >> 11) * _INV_2_53
        self.state = x
        return out

    def normal(self, n: int) -> np.ndarray:
        """``n`` standard normal deviates by Box-Muller, both branches used."""
        pairs = (n + 1) // 2
        u = self.uniform(2 * pairs)
        u1 = 1.0 - u[0::2]  # (0, 1], keeps the log finite
        u2 = u[1::2]
        r = np.sqrt(-2.0 * np.log(u1))
        z = np.empty(2 * pairs)
        z[0::2] = r * np.cos(2 * np.pi * u2)
        z[1::2] = r * np.sin(2 * np.pi * u2)
        return z[:n]


@dataclass(frozen=True)
class PnPair:
    seq0: np.ndarray
    seq1: np.ndarray

    def __len__(self) -> int:
        return len(self.seq0)


def generate_pn_pair(seed: int, length: int) -> PnPair:
    """Draw ``seq0`` then ``seq1`` from one stream; redraw ``seq1`` on collision."""
    if length < 1:
        raise ValueError("PN length must be >= 1")
    rng = XorShift64Star(seed)
    seq0 = rng.signs(length)
    seq1 = rng.signs(length)
    while np.array_equal(seq0, seq1):
        seq1 = rng.signs(length)
    return PnPair(seq0, seq1)


def parse_key(text: str) -> int:
    """Accept a decimal or ``0x`` hexadecimal 64-bit key."""
    value = int(text, 0)
    if not 0 <= value <= MASK64:
        raise ValueError(f"key {text!r} is outside the unsigned 64-bit range")
    return value
