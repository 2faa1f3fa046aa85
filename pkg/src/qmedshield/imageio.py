"""Grayscale image files: binary PGM (P5, maxval 255) and optional 8-bit PNG."""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .bitplane import as_gray_image

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


class UnsupportedFormatError(ValueError):
    pass


def _header_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """Read ``count`` whitespace-separated header tokens, skipping comments.

    Returns the tokens and the offset just past the single whitespace byte
    that terminates the last token.
    """
    tokens: list[bytes] = []
    i, n = 0, len(data)
    while len(tokens) < count:
        while i < n and data[i : i + 1].isspace():
            i += 1
        if i < n and data[i : i + 1] == b"#":
            while i < n and data[i : i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        start = i
        while i < n and not data[i : i + 1].isspace() and data[i : i + 1] != b"#":
            i += 1
        if start == i:
            raise UnsupportedFormatError("truncated PGM header")
        tokens.append(data[start:i])
    if i >= n or not data[i : i + 1].isspace():
        raise UnsupportedFormatError("PGM header must end with a whitespace byte")
    return tokens, i + 1


def decode_pgm(data: bytes) -> np.ndarray:
    if data[:2] != b"P5":
        raise UnsupportedFormatError("not a binary PGM (P5) file")
    tokens, offset = _header_tokens(data, 4)
    try:
        w, h, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise UnsupportedFormatError(f"malformed PGM header {tokens!r}") from None
    if w < 1 or h < 1:
        raise UnsupportedFormatError(f"invalid PGM size {w}x{h}")
    if maxval != 255:
        raise UnsupportedFormatError(f"only 8-bit PGM (maxval 255) is supported, got maxval {maxval}")
    payload = data[offset : offset + w * h]
    if len(payload) < w * h:
        raise UnsupportedFormatError(f"PGM payload truncated: {len(payload)} of {w * h} bytes")
    return np.frombuffer(payload, dtype=np.uint8).reshape(h, w).copy()


def encode_pgm(img) -> bytes:
    img = as_gray_image(img)
    h, w = img.shape
    return f"P5\n{w} {h}\n255\n".encode("ascii") + np.ascontiguousarray(img).tobytes()


def _pil():
    try:
        from PIL import Image
    except ImportError:  # pragma: no cover - depends on environment
        raise UnsupportedFormatError("PNG support requires Pillow (pip install qmedshield[png])") from None
    return Image


def decode_png(path: str | os.PathLike, convert: bool = False) -> np.ndarray:
    Image = _pil()
    with Image.open(path) as im:
        if im.mode != "L":
            if not convert:
                raise UnsupportedFormatError(
                    f"PNG must be 8-bit single-channel (mode 'L'), got mode {im.mode!r}"
                )
            im = im.convert("L")
        return np.asarray(im, dtype=np.uint8).copy()


def read_image(path: str | os.PathLike, convert: bool = False) -> np.ndarray:
    """Read a grayscale image, detecting the format from the file's magic bytes."""
    data = Path(path).read_bytes()
    if data.startswith(b"P5"):
        return decode_pgm(data)
    if data.startswith(PNG_MAGIC):
        return decode_png(path, convert)
    if data[:2] in (b"P1", b"P2", b"P3", b"P4", b"P6"):
        raise UnsupportedFormatError(f"unsupported netpbm variant {data[:2].decode()}")
    raise UnsupportedFormatError(f"unrecognised image format: {path}")


def write_image(path: str | os.PathLike, img, fmt: str | None = None) -> None:
    """Write ``img`` losslessly; ``fmt`` is ``"pgm"`` or ``"png"`` (default from suffix)."""
    path = Path(path)
    if fmt is None:
        fmt = "png" if path.suffix.lower() == ".png" else "pgm"
    img = as_gray_image(img)
    if fmt == "pgm":
        path.write_bytes(encode_pgm(img))
    elif fmt == "png":
        _pil().fromarray(img, mode="L").save(path, format="PNG")
    else:
        raise UnsupportedFormatError(f"unknown output format {fmt!r}")
