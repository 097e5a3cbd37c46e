"""Image quality (MSE, PSNR, SSIM) and watermark similarity (NC, BER)."""

from __future__ import annotations

import math

import numpy as np
from scipy.ndimage import correlate

__all__ = ["mse", "psnr", "ssim", "ssim_map", "gaussian_window", "nc", "ber"]

MAX_PIXEL = 255.0
SSIM_K1 = 0.01
SSIM_K2 = 0.03
SSIM_WINDOW = 11
SSIM_SIGMA = 1.5


def _same_shape(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a, b


def mse(a: np.ndarray, b: np.ndarray) -> float:
    a, b = _same_shape(a, b)
    return float(np.mean((a - b) ** 2))


def psnr(a: np.ndarray, b: np.ndarray) -> float:
    """Peak signal-to-noise ratio in dB; ``inf`` when the images are equal."""
    err = mse(a, b)
    if err == 0:
        return math.inf
    return 10.0 * math.log10(MAX_PIXEL**2 / err)


def gaussian_window(size: int = SSIM_WINDOW, sigma: float = SSIM_SIGMA) -> np.ndarray:
    """Normalized ``size x size`` Gaussian kernel sampled at integer offsets."""
    r = np.arange(size) - (size - 1) / 2
    g = np.exp(-(r[:, None] ** 2 + r[None, :] ** 2) / (2 * sigma**2))
    return g / g.sum()


def ssim_map(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = _same_shape(a, b)
    if min(a.shape) < SSIM_WINDOW:
        raise ValueError(f"SSIM needs both sides >= {SSIM_WINDOW}, got {a.shape}")
    w = gaussian_window()

    def filt(x):
        return correlate(x, w, mode="reflect")

    c1 = (SSIM_K1 * MAX_PIXEL) ** 2
    c2 = (SSIM_K2 * MAX_PIXEL) ** 2
    mu_a, mu_b = filt(a), filt(b)
    var_a = filt(a * a) - mu_a * mu_a
    var_b = filt(b * b) - mu_b * mu_b
    cov = filt(a * b) - mu_a * mu_b
    num = (2 * mu_a * mu_b + c1) * (2 * cov + c2)
    den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2)
    return num / den


def ssim(a: np.ndarray, b: np.ndarray) -> float:
    """Mean SSIM over an 11x11 Gaussian window (sigma 1.5), symmetric borders."""
    return float(np.mean(ssim_map(a, b)))


def _bit_pair(w, w2):
    w = np.asarray(w, dtype=np.float64)
    w2 = np.asarray(w2, dtype=np.float64)
    if w.shape != w2.shape:
        raise ValueError(f"watermark shape mismatch: {w.shape} vs {w2.shape}")
    return w, w2


def nc(w: np.ndarray, w2: np.ndarray) -> float:
    """Normalized correlation; 0 if either watermark is all zeros."""
    w, w2 = _bit_pair(w, w2)
    den = math.sqrt(float(np.sum(w * w))) * math.sqrt(float(np.sum(w2 * w2)))
    if den == 0:
        return 0.0
    return float(np.sum(w * w2)) / den


def ber(w: np.ndarray, w2: np.ndarray) -> float:
    w, w2 = _bit_pair(w, w2)
    return float(np.count_nonzero(w != w2)) / w.size
