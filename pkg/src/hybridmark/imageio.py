"""Netpbm I/O for 8-bit grayscale hosts (PGM) and binary logos (PBM).

Images are plain ``float64`` numpy arrays of shape ``(height, width)``;
watermarks are ``uint8`` arrays over ``{0, 1}``.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = [
    "FormatError",
    "check_gray_image",
    "check_watermark",
    "round_clip",
    "read_pgm",
    "write_pgm",
    "read_watermark_pbm",
    "write_watermark_pbm",
]

_WHITESPACE = b" \t\n\r\v\f"


class FormatError(ValueError):
    """Raised when a Netpbm file is malformed or unsupported."""


def check_gray_image(img: np.ndarray) -> np.ndarray:
    """Validate the host-image invariants and return ``img`` as float64."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2:
        raise ValueError(f"expected a 2-D grayscale image, got shape {img.shape}")
    h, w = img.shape
    if h < 8 or w < 8 or h % 8 or w % 8:
        raise ValueError(f"image dimensions must be multiples of 8 and >= 8, got {h}x{w}")
    return img


def check_watermark(bits: np.ndarray) -> np.ndarray:
    bits = np.asarray(bits)
    if bits.ndim != 2:
        raise ValueError(f"watermark must be 2-D, got shape {bits.shape}")
    if not np.all((bits == 0) | (bits == 1)):
        raise ValueError("watermark elements must be 0 or 1")
    return bits.astype(np.uint8)


def round_clip(img: np.ndarray) -> np.ndarray:
    """Round half away from zero and clip to [0, 255]; returns float64."""
    img = np.asarray(img, dtype=np.float64)
    rounded = np.sign(img) * np.floor(np.abs(img) + 0.5)
    return np.clip(rounded, 0.0, 255.0)


def _read_header(data: bytes, count: int) -> tuple[bytes, list[int], int]:
    """Parse the magic number and ``count`` integer fields of a Netpbm header.

    Returns the magic, the parsed integers and the offset of the single
    whitespace byte that terminates the header.
    """
    if len(data) < 2 or data[:1] != b"P":
        raise FormatError("missing Netpbm magic number at byte offset 0")
    magic = data[:2]
    pos = 2
    fields: list[int] = []
    while len(fields) < count:
        while pos < len(data) and (data[pos] in _WHITESPACE or data[pos] == ord("#")):
            if data[pos] == ord("#"):
                while pos < len(data) and data[pos] not in b"\r\n":
                    pos += 1
            else:
                pos += 1
        start = pos
        while pos < len(data) and data[pos:pos + 1].isdigit():
            pos += 1
        if start == pos:
            raise FormatError(f"expected a decimal header field at byte offset {start}")
        fields.append(int(data[start:pos]))
    if pos >= len(data) or data[pos] not in _WHITESPACE:
        raise FormatError(f"header not terminated by whitespace at byte offset {pos}")
    return magic, fields, pos


def read_pgm(path: str | os.PathLike) -> np.ndarray:
    """Read a binary (P5) PGM with maxval 255.

    Pixel ``(i, j)`` is the raster byte at offset ``i * width + j``.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    magic, (width, height, maxval), end = _read_header(data, 3)
    if magic != b"P5":
        raise FormatError(f"unsupported magic {magic!r} at byte offset 0, expected P5")
    if maxval != 255:
        raise FormatError(f"maxval {maxval} is not 255 (header ends at byte offset {end})")
    if width < 1 or height < 1:
        raise FormatError(f"empty raster {width}x{height} declared before byte offset {end}")
    start = end + 1
    need = width * height
    if len(data) - start < need:
        raise FormatError(
            f"truncated raster: expected {need} bytes from byte offset {start}, "
            f"file ends at byte offset {len(data)}"
        )
    raster = np.frombuffer(data, dtype=np.uint8, count=need, offset=start)
    return raster.reshape(height, width).astype(np.float64)


def write_pgm(img: np.ndarray, path: str | os.PathLike) -> None:
    """Write ``img`` as P5 after rounding half away from zero and clipping."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2:
        raise ValueError(f"expected a 2-D image, got shape {img.shape}")
    raster = round_clip(img).astype(np.uint8)
    h, w = raster.shape
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n255\n" % (w, h))
        fh.write(raster.tobytes())


def read_watermark_pbm(path: str | os.PathLike) -> np.ndarray:
    """Read a P1 or P4 bitmap; black (1) becomes bit 1, white becomes bit 0."""
    with open(path, "rb") as fh:
        data = fh.read()
    magic, (width, height), end = _read_header(data, 2)
    if width < 1 or height < 1:
        raise FormatError(f"empty bitmap {width}x{height} declared before byte offset {end}")
    if magic == b"P4":
        start = end + 1
        stride = (width + 7) // 8
        need = stride * height
        if len(data) - start < need:
            raise FormatError(
                f"truncated raster: expected {need} bytes from byte offset {start}, "
                f"file ends at byte offset {len(data)}"
            )
        packed = np.frombuffer(data, dtype=np.uint8, count=need, offset=start)
        bits = np.unpackbits(packed.reshape(height, stride), axis=1)[:, :width]
        return bits.astype(np.uint8)
    if magic == b"P1":
        values = []
        pos = end
        while pos < len(data) and len(values) < width * height:
            ch = data[pos]
            if ch == ord("#"):
                while pos < len(data) and data[pos] not in b"\r\n":
                    pos += 1
                continue
            if ch in b"01":
                values.append(ch - ord("0"))
            elif ch not in _WHITESPACE:
                raise FormatError(f"invalid P1 sample {chr(ch)!r} at byte offset {pos}")
            pos += 1
        if len(values) < width * height:
            raise FormatError(
                f"truncated raster: {len(values)} of {width * height} samples before "
                f"byte offset {len(data)}"
            )
        return np.array(values, dtype=np.uint8).reshape(height, width)
    raise FormatError(f"unsupported magic {magic!r} at byte offset 0, expected P1 or P4")


def write_watermark_pbm(bits: np.ndarray, path: str | os.PathLike) -> None:
    """Write a bit matrix as a binary (P4) bitmap."""
    bits = check_watermark(bits)
    h, w = bits.shape
    packed = np.packbits(bits, axis=1)
    with open(path, "wb") as fh:
        fh.write(b"P4\n%d %d\n" % (w, h))
        fh.write(packed.tobytes())
