"""Arnold cat-map scrambling of bit matrices.

One forward step moves the cell at ``(a, b)`` (row, column) to
``((a + b) mod N, (a + 2b) mod N)``.  Non-square logos are packed row-major
into the smallest enclosing square, zero padded, before scrambling.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

__all__ = [
    "arnold_scramble",
    "arnold_descramble",
    "arnold_period",
    "packed_side",
    "scramble_bits",
    "descramble_bits",
]


@lru_cache(maxsize=64)
def _step_indices(n: int) -> tuple[np.ndarray, np.ndarray]:
    a, b = np.indices((n, n))
    return (a + b) % n, (a + 2 * b) % n


def _check_square(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError(f"Arnold map needs a non-empty square matrix, got shape {m.shape}")
    return m


def _reduced_iterations(n: int, iterations: int) -> int:
    if iterations < 0:
        raise ValueError("iteration count must be non-negative")
    return iterations % arnold_period(n)


def arnold_scramble(m: np.ndarray, iterations: int) -> np.ndarray:
    """Apply the cat map ``iterations`` times."""
    m = _check_square(m)
    n = m.shape[0]
    dst_a, dst_b = _step_indices(n)
    out = m.copy()
    for _ in range(_reduced_iterations(n, iterations)):
        nxt = np.empty_like(out)
        nxt[dst_a, dst_b] = out
        out = nxt
    return out


def arnold_descramble(m: np.ndarray, iterations: int) -> np.ndarray:
    """Exact inverse of :func:`arnold_scramble` for the same iteration count."""
    m = _check_square(m)
    n = m.shape[0]
    dst_a, dst_b = _step_indices(n)
    out = m.copy()
    for _ in range(_reduced_iterations(n, iterations)):
        # pulling from the forward destination is the inverse map (2a'-b', -a'+b')
        out = out[dst_a, dst_b]
    return out


@lru_cache(maxsize=None)
def arnold_period(n: int) -> int:
    """Smallest ``T >= 1`` such that ``T`` steps are the identity on ``Z_n x Z_n``."""
    if n < 1:
        raise ValueError("side must be >= 1")
    a0, b0 = np.indices((n, n))
    a, b = a0, b0
    t = 0
    while True:
        a, b = (a + b) % n, (a + 2 * b) % n
        t += 1
        if np.array_equal(a, a0) and np.array_equal(b, b0):
            return t


def packed_side(rows: int, cols: int) -> int:
    return math.isqrt(rows * cols - 1) + 1 if rows * cols > 0 else 0


def _carrier_positions(rows: int, cols: int, iterations: int) -> np.ndarray:
    """Flat indices, in the scrambled square, of the cells that hold logo bits."""
    side = packed_side(rows, cols)
    origin = np.zeros(side * side, dtype=np.uint8)
    origin[: rows * cols] = 1
    moved = arnold_scramble(origin.reshape(side, side), iterations).ravel()
    return np.flatnonzero(moved)


def scramble_bits(bits: np.ndarray, iterations: int) -> np.ndarray:
    """Scramble a ``rows x cols`` logo into a flat sequence of ``rows*cols`` bits.

    The padding cells of the square are dropped after scrambling; their
    positions depend only on the logo shape and the key, so the receiver can
    reinsert them.
    """
    bits = np.asarray(bits, dtype=np.uint8)
    rows, cols = bits.shape
    side = packed_side(rows, cols)
    square = np.zeros(side * side, dtype=np.uint8)
    square[: rows * cols] = bits.ravel()
    scrambled = arnold_scramble(square.reshape(side, side), iterations).ravel()
    return scrambled[_carrier_positions(rows, cols, iterations)]


def descramble_bits(seq: np.ndarray, rows: int, cols: int, iterations: int) -> np.ndarray:
    """Inverse of :func:`scramble_bits`."""
    seq = np.asarray(seq, dtype=np.uint8).ravel()
    if seq.size != rows * cols:
        raise ValueError(f"expected {rows * cols} bits, got {seq.size}")
    side = packed_side(rows, cols)
    square = np.zeros(side * side, dtype=np.uint8)
    square[_carrier_positions(rows, cols, iterations)] = seq
    plain = arnold_descramble(square.reshape(side, side), iterations).ravel()
    return plain[: rows * cols].reshape(rows, cols)
