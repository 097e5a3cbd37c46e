"""Blind spread-spectrum embedding in the block DCT of the DFT magnitude.

Embedding
    1. scramble the logo with the Arnold key;
    2. take the DFT magnitude and phase of the host;
    3. tile the magnitude into 8x8 blocks and DCT each block;
    4. block ``i`` (row-major) carries scrambled bit ``i``: its mid-band
       coefficients get ``+ strength * PN_0`` or ``+ strength * PN_1``;
    5. inverse DCT, recombine with the untouched phase, inverse DFT, keep
       the real part and quantize to 8 bits.

Extraction repeats steps 2-3 on the received image and decides each bit by
comparing the Pearson correlation of the block's mid-band coefficients with
the two carriers.  Only the keys and the logo shape are needed.

``strength`` is expressed on the scale of the unnormalized DFT magnitude,
i.e. ``H * W`` times the magnitude returned by :func:`transforms.dft2`.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import metrics
from .arnold import descramble_bits, scramble_bits
from .imageio import check_gray_image, check_watermark, round_clip
from .pn import generate_pn_pair
from .transforms import (
    BLOCK,
    dct2_blocks,
    dft2,
    from_blocks,
    idct2_blocks,
    idft2,
    midband_mask,
    to_blocks,
)

__all__ = ["CapacityError", "EmbedConfig", "EmbedResult", "block_capacity", "embed", "extract"]

DEFAULT_STRENGTH = 9600.0
DEFAULT_ARNOLD_KEY = 24


class CapacityError(ValueError):
    """The logo has more bits than the host has 8x8 blocks."""


@dataclass(frozen=True)
class EmbedConfig:
    """Keys and parameters shared by the embedder and the blind extractor.

    ``dct_stage=False`` adds the carriers straight into the magnitude tiles
    (the DFT-only ablation).  ``centered=False`` tiles the magnitude in its
    natural layout, with DC in the first block, instead of the centered one.
    """

    pn_key: int
    watermark_rows: int
    watermark_cols: int
    arnold_key: int = DEFAULT_ARNOLD_KEY
    strength: float = DEFAULT_STRENGTH
    mask: tuple[tuple[int, int], ...] = field(default_factory=lambda: tuple(midband_mask()))
    dct_stage: bool = True
    centered: bool = True

    def __post_init__(self):
        if not self.strength >= 0:
            raise ValueError(f"strength must be non-negative, got {self.strength}")
        if self.arnold_key < 0:
            raise ValueError("Arnold key must be non-negative")
        if self.watermark_rows < 1 or self.watermark_cols < 1:
            raise ValueError("watermark dimensions must be positive")
        if not self.mask:
            raise ValueError("mask must select at least one coefficient")

    @property
    def n_bits(self) -> int:
        return self.watermark_rows * self.watermark_cols

    def with_strength(self, strength: float) -> "EmbedConfig":
        return replace(self, strength=strength)


@dataclass(frozen=True)
class EmbedResult:
    watermarked: np.ndarray
    psnr: float
    ssim: float


def block_capacity(shape: tuple[int, int]) -> int:
    h, w = shape
    return (h // BLOCK) * (w // BLOCK)


def _check_capacity(shape, n_bits: int) -> None:
    blocks = block_capacity(shape)
    if n_bits > blocks:
        raise CapacityError(f"watermark has {n_bits} bits but the host has only {blocks} blocks")


def _scaled_magnitude(img: np.ndarray, cfg: EmbedConfig):
    spec = dft2(img)
    mag = spec.magnitude * img.size
    if cfg.centered:
        mag = np.fft.fftshift(mag)
    return mag, spec.phase


def _analysis(mag: np.ndarray, cfg: EmbedConfig) -> np.ndarray:
    if cfg.dct_stage:
        return dct2_blocks(mag).blocks
    return to_blocks(mag).copy()


def _synthesis(blocks: np.ndarray, cfg: EmbedConfig) -> np.ndarray:
    return idct2_blocks(blocks) if cfg.dct_stage else from_blocks(blocks)


def _mask_index(cfg: EmbedConfig):
    mu, mv = zip(*cfg.mask)
    return np.array(mu), np.array(mv)


def embed(host: np.ndarray, wm: np.ndarray, cfg: EmbedConfig) -> EmbedResult:
    host = check_gray_image(host)
    wm = check_watermark(wm)
    if wm.shape != (cfg.watermark_rows, cfg.watermark_cols):
        raise ValueError(
            f"watermark shape {wm.shape} does not match config "
            f"{(cfg.watermark_rows, cfg.watermark_cols)}"
        )
    _check_capacity(host.shape, wm.size)

    seq = scramble_bits(wm, cfg.arnold_key)
    mag, phase = _scaled_magnitude(host, cfg)
    pn = generate_pn_pair(cfg.pn_key, len(cfg.mask))

    coeffs = _analysis(mag, cfg)
    flat = coeffs.reshape(-1, BLOCK, BLOCK)
    carriers = np.where(seq[:, None] == 1, pn.seq1, pn.seq0)
    mu, mv = _mask_index(cfg)
    flat[: seq.size, mu, mv] += cfg.strength * carriers

    mag_w = _synthesis(coeffs, cfg)
    if cfg.centered:
        mag_w = np.fft.ifftshift(mag_w)
    # the edited magnitude is no longer conjugate symmetric; keep the real part
    plane = (mag_w / host.size) * np.exp(1j * phase)
    watermarked = round_clip(idft2(plane))
    return EmbedResult(
        watermarked=watermarked,
        psnr=metrics.psnr(host, watermarked),
        ssim=metrics.ssim(host, watermarked),
    )


def _pearson(x: np.ndarray, s: np.ndarray) -> np.ndarray:
    xc = x - x.mean(axis=1, keepdims=True)
    sc = s - s.mean()
    num = xc @ sc
    den = np.linalg.norm(xc, axis=1) * np.linalg.norm(sc)
    return np.divide(num, den, out=np.zeros_like(num), where=den > 0)


def correlations(img: np.ndarray, cfg: EmbedConfig) -> tuple[np.ndarray, np.ndarray]:
    """Per-block correlations with the bit-0 and bit-1 carriers, in block order."""
    img = check_gray_image(img)
    _check_capacity(img.shape, cfg.n_bits)
    mag, _ = _scaled_magnitude(img, cfg)
    flat = _analysis(mag, cfg).reshape(-1, BLOCK, BLOCK)
    mu, mv = _mask_index(cfg)
    x = flat[: cfg.n_bits, mu, mv]
    pn = generate_pn_pair(cfg.pn_key, len(cfg.mask))
    return _pearson(x, pn.seq0), _pearson(x, pn.seq1)


def extract(img: np.ndarray, cfg: EmbedConfig) -> np.ndarray:
    """Blind extraction; ties between the two correlations decode as 0."""
    corr0, corr1 = correlations(img, cfg)
    seq = (corr1 > corr0).astype(np.uint8)
    return descramble_bits(seq, cfg.watermark_rows, cfg.watermark_cols, cfg.arnold_key)
