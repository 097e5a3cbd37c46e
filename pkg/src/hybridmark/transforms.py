"""Spectral kernels: normalized 2-D DFT with polar form, and 8x8 block DCT.

Forward DFT convention::

    F(u, v) = 1/(MN) * sum_x sum_y f(x, y) exp(-2j*pi*(ux/M + vy/N))

with no factor on the inverse, so ``F[0, 0]`` is the mean pixel value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "BLOCK",
    "Spectrum",
    "DctBlockGrid",
    "dft2",
    "idft2",
    "dct_matrix",
    "dct2_blocks",
    "idct2_blocks",
    "midband_mask",
    "to_blocks",
    "from_blocks",
]

BLOCK = 8


@dataclass(frozen=True)
class Spectrum:
    """Polar form of a complex DFT plane."""

    magnitude: np.ndarray
    phase: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.magnitude.shape

    @property
    def real(self) -> np.ndarray:
        return self.magnitude * np.cos(self.phase)

    @property
    def imag(self) -> np.ndarray:
        return self.magnitude * np.sin(self.phase)

    def to_complex(self) -> np.ndarray:
        return self.magnitude * np.exp(1j * self.phase)

    @classmethod
    def from_complex(cls, plane: np.ndarray) -> "Spectrum":
        plane = np.asarray(plane, dtype=np.complex128)
        phase = np.arctan2(plane.imag, plane.real)
        # arctan2 can return -pi for a negative-zero imaginary part
        phase[phase <= -np.pi] += 2 * np.pi
        return cls(np.abs(plane), phase)


@dataclass(frozen=True)
class DctBlockGrid:
    """8x8 DCT coefficient blocks, indexed ``blocks[block_row, block_col, u, v]``."""

    blocks: np.ndarray

    @property
    def block_rows(self) -> int:
        return self.blocks.shape[0]

    @property
    def block_cols(self) -> int:
        return self.blocks.shape[1]

    @property
    def source_shape(self) -> tuple[int, int]:
        return self.block_rows * BLOCK, self.block_cols * BLOCK


def _is_pow2(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def _dft_matrix(n: int, sign: float) -> np.ndarray:
    k = np.arange(n)
    # reduce the exponent modulo n before scaling keeps the phase argument small
    return np.exp(sign * 2j * np.pi * (np.outer(k, k) % n) / n)


def _dft2_complex(img: np.ndarray) -> np.ndarray:
    m, n = img.shape
    if _is_pow2(m) and _is_pow2(n):
        return np.fft.fft2(img) / (m * n)
    # direct row-column evaluation, O(MN(M+N))
    return _dft_matrix(m, -1.0) @ img.astype(np.complex128) @ _dft_matrix(n, -1.0) / (m * n)


def _idft2_complex(plane: np.ndarray) -> np.ndarray:
    m, n = plane.shape
    if _is_pow2(m) and _is_pow2(n):
        return np.fft.ifft2(plane) * (m * n)
    return _dft_matrix(m, 1.0) @ plane @ _dft_matrix(n, 1.0)


def dft2(img: np.ndarray) -> Spectrum:
    """Forward DFT with 1/(MN) normalization, returned as magnitude and phase."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2:
        raise ValueError(f"expected a 2-D array, got shape {img.shape}")
    return Spectrum.from_complex(_dft2_complex(img))


def idft2(spec: Spectrum | np.ndarray) -> np.ndarray:
    """Inverse DFT (unnormalized); returns the real part, unclipped.

    Accepts either a :class:`Spectrum` or a complex plane.
    """
    plane = spec.to_complex() if isinstance(spec, Spectrum) else np.asarray(spec, np.complex128)
    return _idft2_complex(plane).real


def dct_matrix(n: int = BLOCK) -> np.ndarray:
    """Orthonormal DCT-II basis; row ``u`` holds the ``u``-th cosine."""
    x = np.arange(n)
    u = x[:, None]
    basis = np.cos((2 * x[None, :] + 1) * u * np.pi / (2 * n))
    alpha = np.where(u == 0, 1 / np.sqrt(2), 1.0)
    return np.sqrt(2.0 / n) * alpha * basis


_D8 = dct_matrix(BLOCK)


def to_blocks(matrix: np.ndarray) -> np.ndarray:
    """Reshape ``(H, W)`` into ``(H/8, W/8, 8, 8)`` tiles (row-major block order)."""
    matrix = np.asarray(matrix)
    h, w = matrix.shape
    if h % BLOCK or w % BLOCK:
        raise ValueError(f"dimensions {h}x{w} are not divisible by {BLOCK}")
    return matrix.reshape(h // BLOCK, BLOCK, w // BLOCK, BLOCK).swapaxes(1, 2)


def from_blocks(blocks: np.ndarray) -> np.ndarray:
    br, bc = blocks.shape[:2]
    return blocks.swapaxes(1, 2).reshape(br * BLOCK, bc * BLOCK)


def dct2_blocks(matrix: np.ndarray) -> DctBlockGrid:
    """Orthonormal 2-D DCT of every 8x8 tile, each tile independently."""
    tiles = to_blocks(np.asarray(matrix, dtype=np.float64))
    return DctBlockGrid(_D8 @ tiles @ _D8.T)


def idct2_blocks(grid: DctBlockGrid | np.ndarray) -> np.ndarray:
    blocks = grid.blocks if isinstance(grid, DctBlockGrid) else np.asarray(grid, np.float64)
    return from_blocks(_D8.T @ blocks @ _D8)


def midband_mask() -> list[tuple[int, int]]:
    """The 22 mid-band positions ``6 <= u + v <= 8`` of an 8x8 block, row-major."""
    return [(u, v) for u in range(BLOCK) for v in range(BLOCK) if 6 <= u + v <= 8]
