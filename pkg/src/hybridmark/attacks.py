"""Deterministic attack battery and its text-token grammar.

Tokens look like ``gn:var=0.001,seed=7``, ``jpeg:qf=90`` or
``chain:[he|gn:var=0.001,seed=7]``.  Every attack returns an 8-bit image of
the input's size (as float64).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import correlate, rotate

from .imageio import round_clip
from .pn import XorShift64Star
from .transforms import dct2_blocks, idct2_blocks

__all__ = [
    "AttackError",
    "AttackSpec",
    "LUMA_QUANT_TABLE",
    "gaussian_kernel",
    "gaussian_noise",
    "salt_pepper",
    "gaussian_blur",
    "histogram_equalize",
    "jpeg_quant_table",
    "jpeg_attack",
    "crop_attack",
    "rotate_attack",
    "apply_attack",
    "apply_chain",
    "parse_attack",
    "format_attack",
]

# ITU-T T.81 Annex K, Table K.1
LUMA_QUANT_TABLE = np.array(
    [
        [16, 11, 10, 16, 24, 40, 51, 61],
        [12, 12, 14, 19, 26, 58, 60, 55],
        [14, 13, 16, 24, 40, 57, 69, 56],
        [14, 17, 22, 29, 51, 87, 80, 62],
        [18, 22, 37, 56, 68, 109, 103, 77],
        [24, 35, 55, 64, 81, 104, 113, 92],
        [49, 64, 78, 87, 103, 121, 120, 101],
        [72, 92, 95, 98, 112, 100, 103, 99],
    ],
    dtype=np.float64,
)


class AttackError(ValueError):
    """Invalid attack parameters or a malformed attack token."""


def _check_image(img):
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2:
        raise AttackError(f"expected a 2-D image, got shape {img.shape}")
    return img


def gaussian_noise(img: np.ndarray, variance: float, seed: int) -> np.ndarray:
    """Additive N(0, variance) noise on the unit pixel scale."""
    if not 0 < variance <= 1:
        raise AttackError(f"noise variance must be in (0, 1], got {variance}")
    img = _check_image(img)
    eps = XorShift64Star(seed).normal(img.size).reshape(img.shape)
    return round_clip(img + 255.0 * np.sqrt(variance) * eps)


def salt_pepper(img: np.ndarray, density: float, seed: int) -> np.ndarray:
    """Each pixel becomes 0 or 255 (equally likely) with probability ``density``."""
    if not 0 < density <= 1:
        raise AttackError(f"salt & pepper density must be in (0, 1], got {density}")
    img = _check_image(img)
    u = XorShift64Star(seed).uniform(img.size).reshape(img.shape)
    out = round_clip(img)
    out[u < density / 2] = 0.0
    out[(u >= density / 2) & (u < density)] = 255.0
    return out


def gaussian_kernel(sigma: float, window: int) -> np.ndarray:
    r = np.arange(window) - window // 2
    g = np.exp(-(r[:, None] ** 2 + r[None, :] ** 2) / (2.0 * sigma**2))
    return g / g.sum()


def gaussian_blur(img: np.ndarray, sigma: float, window: int) -> np.ndarray:
    if window not in (3, 5, 7, 9):
        raise AttackError(f"window must be 3, 5, 7 or 9, got {window}")
    if not sigma > 0:
        raise AttackError(f"sigma must be positive, got {sigma}")
    img = _check_image(img)
    return round_clip(correlate(img, gaussian_kernel(sigma, window), mode="reflect"))


def histogram_equalize(img: np.ndarray) -> np.ndarray:
    """256-bin equalization anchored so the darkest occupied level maps to 0."""
    img = round_clip(_check_image(img))
    levels = img.astype(np.int64)
    cdf = np.cumsum(np.bincount(levels.ravel(), minlength=256))
    cdf_min = cdf[levels.min()]
    span = img.size - cdf_min
    if span == 0:
        return np.zeros_like(img)
    lut = round_clip(255.0 * (cdf - cdf_min) / span)
    return lut[levels]


def jpeg_quant_table(quality: int) -> np.ndarray:
    """Annex K luminance table scaled with the libjpeg quality rule."""
    if not 1 <= quality <= 99:
        raise AttackError(f"JPEG quality must be in [1, 99], got {quality}")
    scale = 5000 // quality if quality < 50 else 200 - 2 * quality
    return np.clip(np.floor((LUMA_QUANT_TABLE * scale + 50) / 100), 1, 255)


def _round_half_away(x):
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def jpeg_attack(img: np.ndarray, quality: int) -> np.ndarray:
    """Pixel-domain baseline-JPEG luminance round trip (no entropy coding)."""
    q = jpeg_quant_table(quality)
    img = round_clip(_check_image(img))
    coeffs = dct2_blocks(img - 128.0).blocks
    coeffs = _round_half_away(coeffs / q) * q
    return round_clip(idct2_blocks(coeffs) + 128.0)


def crop_attack(img: np.ndarray, fraction: float, anchor: str = "top-left") -> np.ndarray:
    """Zero a rectangle covering ``fraction`` of the area, same aspect ratio."""
    if not 0 < fraction < 1:
        raise AttackError(f"crop fraction must be in (0, 1), got {fraction}")
    img = _check_image(img)
    h, w = img.shape
    ch = int(round(h * np.sqrt(fraction)))
    cw = int(round(w * np.sqrt(fraction)))
    if anchor == "top-left":
        r0, c0 = 0, 0
    elif anchor == "center":
        r0, c0 = (h - ch) // 2, (w - cw) // 2
    else:
        raise AttackError(f"crop anchor must be 'top-left' or 'center', got {anchor!r}")
    out = img.copy()
    out[r0 : r0 + ch, c0 : c0 + cw] = 0.0
    return out


def rotate_attack(img: np.ndarray, angle: float) -> np.ndarray:
    """Rotate about the center with bilinear interpolation; outside samples are 0."""
    if abs(angle) > 45:
        raise AttackError(f"rotation angle must satisfy |angle| <= 45, got {angle}")
    img = _check_image(img)
    out = rotate(img, angle, reshape=False, order=1, mode="constant", cval=0.0, prefilter=False)
    return round_clip(out)


# -- token grammar -------------------------------------------------------------

# kind -> (parameter name -> (type, default or None if required))
_SCHEMA: dict[str, dict[str, tuple[type, object]]] = {
    "none": {},
    "gn": {"var": (float, None), "seed": (int, 0)},
    "sp": {"density": (float, None), "seed": (int, 0)},
    "lpf": {"sigma": (float, None), "win": (int, None)},
    "smooth": {"sigma": (float, None), "win": (int, None)},
    "he": {},
    "jpeg": {"qf": (int, None)},
    "crop": {"frac": (float, None), "anchor": (str, "top-left")},
    "rot": {"deg": (float, None)},
}

FAMILY_NAMES = {
    "none": "No attack",
    "gn": "Gaussian noise",
    "sp": "Salt & pepper noise",
    "lpf": "Low-pass Gaussian filtering",
    "smooth": "Gaussian smoothing",
    "he": "Histogram equalization",
    "jpeg": "JPEG compression",
    "crop": "Cropping",
    "rot": "Rotation",
    "chain": "Combination attacks",
}


@dataclass(frozen=True)
class AttackSpec:
    """One parsed attack; ``chain`` holds the members of a combined attack."""

    kind: str
    params: tuple[tuple[str, object], ...] = ()
    chain: tuple["AttackSpec", ...] = field(default=())

    def param(self, name: str):
        return dict(self.params)[name]

    @property
    def family(self) -> str:
        return FAMILY_NAMES[self.kind]

    @property
    def token(self) -> str:
        return format_attack(self)


def _fmt_value(v) -> str:
    if isinstance(v, float):
        return repr(v) if v != int(v) or abs(v) >= 1e16 else f"{v:g}"
    return str(v)


def format_attack(spec: AttackSpec) -> str:
    if spec.kind == "chain":
        return "chain:[" + "|".join(format_attack(s) for s in spec.chain) + "]"
    schema = _SCHEMA[spec.kind]
    # required parameters always print; optional ones only when not default
    shown = [(k, v) for k, v in spec.params if schema[k][1] is None or v != schema[k][1]]
    if not shown:
        return spec.kind
    body = ",".join(f"{k}={_fmt_value(v)}" for k, v in shown)
    return f"{spec.kind}:{body}"


def _split_chain(body: str, offset: int, token: str) -> list[tuple[str, int]]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(body):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
            if depth < 0:
                raise AttackError(f"unbalanced ']' at position {offset + i} in {token!r}")
        elif ch == "|" and depth == 0:
            parts.append((body[start:i], offset + start))
            start = i + 1
    if depth:
        raise AttackError(f"unbalanced '[' in {token!r}")
    parts.append((body[start:], offset + start))
    return parts


def _parse(text: str, offset: int, token: str) -> AttackSpec:
    stripped = text.strip()
    offset += len(text) - len(text.lstrip())
    if not stripped:
        raise AttackError(f"empty attack at position {offset} in {token!r}")
    kind, sep, body = stripped.partition(":")
    kind = kind.strip().lower()
    if kind == "chain":
        body_offset = offset + len(stripped) - len(body)
        if not (body.startswith("[") and body.endswith("]")):
            raise AttackError(f"chain body must be '[...]' at position {body_offset} in {token!r}")
        inner = body[1:-1]
        if not inner.strip():
            return AttackSpec("chain")
        members = tuple(_parse(p, o, token) for p, o in _split_chain(inner, body_offset + 1, token))
        return AttackSpec("chain", chain=members)
    if kind not in _SCHEMA:
        raise AttackError(f"unknown attack kind {kind!r} at position {offset} in {token!r}")
    schema = _SCHEMA[kind]
    given: dict[str, object] = {}
    pos = offset + len(kind) + len(sep)
    if sep and body.strip():
        for item in body.split(","):
            name, eq, raw = item.partition("=")
            name = name.strip().lower()
            if not eq or name not in schema:
                raise AttackError(
                    f"bad parameter {item.strip()!r} for {kind!r} at position {pos} in {token!r}"
                )
            typ = schema[name][0]
            try:
                given[name] = typ(raw.strip()) if typ is not int else int(raw.strip(), 0)
            except ValueError:
                raise AttackError(
                    f"cannot read {name}={raw.strip()!r} as {typ.__name__} at position {pos} "
                    f"in {token!r}"
                ) from None
            pos += len(item) + 1
    params = []
    for name, (_typ, default) in schema.items():
        if name in given:
            params.append((name, given[name]))
        elif default is None:
            raise AttackError(f"attack {kind!r} needs parameter {name!r} (in {token!r})")
        else:
            params.append((name, default))
    spec = AttackSpec(kind, tuple(params))
    _validate(spec, token)
    return spec


def _validate(spec: AttackSpec, token: str) -> None:
    p = dict(spec.params)
    checks = {
        "gn": lambda: 0 < p["var"] <= 1,
        "sp": lambda: 0 < p["density"] <= 1,
        "lpf": lambda: p["sigma"] > 0 and p["win"] in (3, 5, 7, 9),
        "smooth": lambda: p["sigma"] > 0 and p["win"] in (3, 5, 7, 9),
        "jpeg": lambda: 1 <= p["qf"] <= 99,
        "crop": lambda: 0 < p["frac"] < 1 and p["anchor"] in ("top-left", "center"),
        "rot": lambda: abs(p["deg"]) <= 45,
    }
    if spec.kind in checks and not checks[spec.kind]():
        raise AttackError(f"parameter out of range in {token!r}")


def parse_attack(token: str) -> AttackSpec:
    """Parse one attack token (see module docstring for the grammar)."""
    return _parse(token, 0, token)


def apply_attack(img: np.ndarray, spec: AttackSpec) -> np.ndarray:
    p = dict(spec.params)
    if spec.kind == "none":
        return round_clip(_check_image(img))
    if spec.kind == "gn":
        return gaussian_noise(img, p["var"], p["seed"])
    if spec.kind == "sp":
        return salt_pepper(img, p["density"], p["seed"])
    if spec.kind in ("lpf", "smooth"):
        return gaussian_blur(img, p["sigma"], p["win"])
    if spec.kind == "he":
        return histogram_equalize(img)
    if spec.kind == "jpeg":
        return jpeg_attack(img, p["qf"])
    if spec.kind == "crop":
        return crop_attack(img, p["frac"], p["anchor"])
    if spec.kind == "rot":
        return rotate_attack(img, p["deg"])
    if spec.kind == "chain":
        return apply_chain(img, spec.chain)
    raise AttackError(f"unknown attack kind {spec.kind!r}")


def apply_chain(img: np.ndarray, specs) -> np.ndarray:
    """Apply attacks left to right; an empty chain returns the image unchanged."""
    out = np.asarray(img, dtype=np.float64)
    for spec in specs:
        out = apply_attack(out, spec)
    return out
