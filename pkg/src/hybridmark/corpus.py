"""Synthetic, PRNG-pinned test material: host images and binary logos.

Each host sums a soft checkerboard, a periodic gradient and low-pass noise
for structure, plus a 1/f noise texture.  The texture gives the
high-frequency part of the spectrum a natural-image-like level: without it
the magnitude there is little more than quantization noise, and the
embedded carriers would push it negative (the extractor only sees ``|M|``).
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .imageio import round_clip, write_pgm, write_watermark_pbm
from .pn import XorShift64Star

__all__ = [
    "soft_checkerboard",
    "periodic_gradient",
    "bandlimited_noise",
    "fractal_noise",
    "synthetic_images",
    "logo_19x52",
    "logo_64x64",
    "generate_corpus",
    "DEFAULT_ATTACK_GRID",
]

DEFAULT_ATTACK_GRID = (
    "jpeg:qf=90",
    "jpeg:qf=50",
    "gn:var=0.001,seed=7",
    "sp:density=0.001,seed=7",
    "lpf:sigma=0.5,win=9",
    "he",
    "crop:frac=0.25",
    "crop:frac=0.5",
    "rot:deg=0.25",
    "chain:[he|gn:var=0.001,seed=7]",
)


def soft_checkerboard(size: int, period: int) -> np.ndarray:
    x = np.arange(size)
    return np.outer(np.cos(2 * np.pi * x / period), np.cos(2 * np.pi * x / period))


def periodic_gradient(size: int, angle: float) -> np.ndarray:
    """One-cycle raised-cosine ramp along ``angle`` (radians); wraps smoothly."""
    y, x = np.indices((size, size))
    t = (np.cos(angle) * x + np.sin(angle) * y) / size
    return np.cos(2 * np.pi * t)


def bandlimited_noise(size: int, cutoff: float, rng: XorShift64Star) -> np.ndarray:
    """Unit-variance real noise whose spectrum is zero beyond ``cutoff`` cycles."""
    white = rng.normal(size * size).reshape(size, size)
    f = np.fft.fftfreq(size) * size
    radius = np.hypot(f[:, None], f[None, :])
    out = np.fft.ifft2(np.fft.fft2(white) * (radius <= cutoff)).real
    return out / out.std()


def fractal_noise(size: int, beta: float, rng: XorShift64Star) -> np.ndarray:
    """Unit-variance noise with amplitude spectrum falling as ``1 / f**beta``."""
    white = rng.normal(size * size).reshape(size, size)
    f = np.fft.fftfreq(size) * size
    radius = np.hypot(f[:, None], f[None, :])
    radius[0, 0] = 1.0
    out = np.fft.ifft2(np.fft.fft2(white) / radius**beta).real
    out -= out.mean()
    return out / out.std()


TEXTURE_STD = 25.0


def synthetic_images(seed: int = 0, size: int = 512, count: int = 5) -> list[np.ndarray]:
    rng = XorShift64Star(seed)
    recipes = [
        # (checker period, checker weight, gradient angle, gradient weight, cutoff, noise weight)
        (64, 1.0, 0.0, 0.0, 48, 0.15),
        (128, 0.3, 0.6, 1.0, 64, 0.2),
        (32, 0.2, 1.1, 0.3, 96, 1.0),
        (16, 0.5, 2.0, 0.6, 32, 0.5),
        (64, 0.6, 2.6, 0.6, 80, 0.6),
    ]
    images = []
    for period, cw, angle, gw, cutoff, nw in (recipes * (count // len(recipes) + 1))[:count]:
        img = (
            cw * soft_checkerboard(size, period)
            + gw * periodic_gradient(size, angle)
            + nw * bandlimited_noise(size, cutoff, rng)
        )
        img = (img - img.min()) / (img.max() - img.min())
        texture = TEXTURE_STD * fractal_noise(size, 1.0, rng)
        images.append(round_clip(45.0 + 165.0 * img + texture))
    return images


def _text_mask(rows: int, cols: int, glyphs: str) -> np.ndarray:
    # 5x3 bitmap font, enough for a short copyright mark
    font = {
        "C": ["111", "100", "100", "100", "111"],
        "O": ["111", "101", "101", "101", "111"],
        "P": ["111", "101", "111", "100", "100"],
        "Y": ["101", "101", "111", "010", "010"],
        "R": ["110", "101", "110", "101", "101"],
        "I": ["111", "010", "010", "010", "111"],
        "G": ["111", "100", "101", "101", "111"],
        "H": ["101", "101", "111", "101", "101"],
        "T": ["111", "010", "010", "010", "010"],
    }
    out = np.zeros((rows, cols), dtype=np.uint8)
    scale = max(1, min((rows - 4) // 5, (cols - 4) // (4 * len(glyphs))))
    width = (4 * len(glyphs) - 1) * scale
    r0 = (rows - 5 * scale) // 2
    c0 = (cols - width) // 2
    for i, ch in enumerate(glyphs):
        g = np.array([[int(b) for b in line] for line in font[ch]], dtype=np.uint8)
        g = np.kron(g, np.ones((scale, scale), dtype=np.uint8))
        c = c0 + i * 4 * scale
        out[r0 : r0 + g.shape[0], c : c + g.shape[1]] = g
    return out


def logo_19x52() -> np.ndarray:
    logo = _text_mask(19, 52, "COPYRIGHT")
    logo[0, :] = logo[-1, :] = 1
    logo[:, 0] = logo[:, -1] = 1
    return logo


def logo_64x64() -> np.ndarray:
    y, x = np.indices((64, 64)) - 31.5
    r = np.hypot(x, y)
    ring = (r > 26) & (r < 31)
    logo = ring.astype(np.uint8)
    logo[22:42, 22:42] |= _text_mask(20, 20, "C")
    return logo


def generate_corpus(out_dir: str | os.PathLike, seed: int = 0) -> Path:
    """Write five hosts, both logos and a ready-to-run ``bench.cfg``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    names = []
    for i, img in enumerate(synthetic_images(seed)):
        name = f"synth_{i}.pgm"
        write_pgm(img, out / name)
        names.append(name)
    write_watermark_pbm(logo_19x52(), out / "logo_19x52.pbm")
    write_watermark_pbm(logo_64x64(), out / "logo_64x64.pbm")
    lines = ["# synthetic corpus, seed %d" % seed]
    lines += [f"image = {n}" for n in names]
    lines += [
        "watermark = logo_19x52.pbm",
        "key1 = 1",
        "key2 = 24",
        "k = 9600",
        "output_dir = report",
        "parallelism = 1",
    ]
    lines += [f"attack = {tok}" for tok in DEFAULT_ATTACK_GRID]
    cfg = out / "bench.cfg"
    cfg.write_text("\n".join(lines) + "\n")
    return cfg
