"""Binary PPM (8-bit display image) and PFM (float linear image) I/O.

Both formats are written byte-deterministically: fixed headers, fixed row
order, fixed quantization. PPM carries the display-encoded 8-bit image; PFM
carries the untouched float framebuffer so numeric twins of every render can
be diffed exactly.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .framebuffer import Framebuffer
from .transfer import TransferFunction, encode


def quantize(encoded: np.ndarray) -> np.ndarray:
    """Map [0, 1] encoded values to uint8 with round-half-up."""
    e = np.clip(np.asarray(encoded, dtype=np.float64), 0.0, 1.0)
    return np.floor(e * 255.0 + 0.5).astype(np.uint8)


def write_image(fb: Framebuffer, tf: TransferFunction, path: str | Path) -> None:
    """Write the display image: clamp, encode with ``tf``, quantize, PPM P6."""
    data = quantize(encode(tf, fb.clamped()))
    header = f"P6\n{fb.width} {fb.height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + data.tobytes())


def write_linear(fb: Framebuffer, path: str | Path) -> None:
    """Write the linear framebuffer as little-endian PFM (scale -1.0)."""
    header = f"PF\n{fb.width} {fb.height}\n-1.0\n".encode("ascii")
    # PFM stores rows bottom-up
    data = np.flipud(fb.pixels).astype("<f4").tobytes()
    Path(path).write_bytes(header + data)


def _read_token(buf: bytes, pos: int) -> tuple[bytes, int]:
    while pos < len(buf) and buf[pos : pos + 1].isspace():
        pos += 1
    start = pos
    while pos < len(buf) and not buf[pos : pos + 1].isspace():
        pos += 1
    if start == pos:
        raise ValueError("truncated image header")
    return buf[start:pos], pos


def read_ppm(path: str | Path) -> np.ndarray:
    """Read a binary PPM written by write_image; returns uint8 (H, W, 3)."""
    buf = Path(path).read_bytes()
    magic, pos = _read_token(buf, 0)
    if magic != b"P6":
        raise ValueError(f"not a binary PPM: magic {magic!r}")
    w_tok, pos = _read_token(buf, pos)
    h_tok, pos = _read_token(buf, pos)
    max_tok, pos = _read_token(buf, pos)
    width, height, maxval = int(w_tok), int(h_tok), int(max_tok)
    if maxval != 255:
        raise ValueError("only 8-bit PPM supported")
    pos += 1  # single whitespace byte after maxval
    expected = width * height * 3
    pixels = np.frombuffer(buf, dtype=np.uint8, count=expected, offset=pos)
    return pixels.reshape(height, width, 3).copy()


def read_pfm(path: str | Path) -> np.ndarray:
    """Read a PFM file; returns float32 (H, W, 3) with row 0 at the top."""
    buf = Path(path).read_bytes()
    magic, pos = _read_token(buf, 0)
    if magic != b"PF":
        raise ValueError(f"not a color PFM: magic {magic!r}")
    w_tok, pos = _read_token(buf, pos)
    h_tok, pos = _read_token(buf, pos)
    scale_tok, pos = _read_token(buf, pos)
    width, height, scale = int(w_tok), int(h_tok), float(scale_tok)
    pos += 1
    dtype = "<f4" if scale < 0 else ">f4"
    pixels = np.frombuffer(buf, dtype=dtype, count=width * height * 3, offset=pos)
    image = pixels.reshape(height, width, 3).astype(np.float32)
    return np.flipud(image).copy()
