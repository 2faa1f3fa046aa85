"""Bit-plane decomposition and plane-level scrambling of 8-bit images.

Images are ``(H, W)`` uint8 arrays; bit planes are ``(8, H, W)`` uint8
arrays of zeros and ones with plane 0 holding the least significant bit.
"""

from __future__ import annotations

import numpy as np

_WEIGHTS = (1 << np.arange(8, dtype=np.uint16)).reshape(8, 1, 1)


class InvalidPermutationError(ValueError):
    pass


def as_gray_image(img) -> np.ndarray:
    """Validate and return ``img`` as a 2D uint8 array."""
    arr = np.asarray(img)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2D image, got shape {arr.shape}")
    if arr.dtype != np.uint8:
        if not np.issubdtype(arr.dtype, np.integer):
            raise ValueError(f"pixels must be integers, got {arr.dtype}")
        if arr.min() < 0 or arr.max() > 255:
            raise ValueError("pixel values must lie in [0, 255]")
        arr = arr.astype(np.uint8)
    return arr


def decompose(img) -> np.ndarray:
    img = as_gray_image(img)
    shifts = np.arange(8, dtype=np.uint8).reshape(8, 1, 1)
    return (img[None, :, :] >> shifts) & 1


def _check_planes(bp) -> np.ndarray:
    bp = np.asarray(bp)
    if bp.ndim != 3 or bp.shape[0] != 8:
        raise ValueError(f"expected 8 bit planes, got shape {bp.shape}")
    return bp


def reassemble(bp) -> np.ndarray:
    """Inverse of :func:`decompose`: ``pixel = sum(plane_k * 2**k)``."""
    bp = _check_planes(bp)
    return (bp.astype(np.uint16) * _WEIGHTS).sum(axis=0).astype(np.uint8)


def check_permutation(perm, size: int = 8) -> np.ndarray:
    p = np.asarray(perm)
    if p.shape != (size,) or sorted(p.tolist()) != list(range(size)):
        raise InvalidPermutationError(f"not a permutation of 0..{size - 1}: {perm!r}")
    return p.astype(np.intp)


def scramble(bp, perm) -> np.ndarray:
    """Reorder planes so that output plane ``j`` is input plane ``perm[j]``."""
    bp = _check_planes(bp)
    return bp[check_permutation(perm)]


def inverse_permutation(perm) -> list[int]:
    p = check_permutation(perm)
    inv = np.empty_like(p)
    inv[p] = np.arange(p.size)
    return inv.tolist()


def scramble_image(img, perm) -> np.ndarray:
    """Decompose, scramble and reassemble in one go."""
    return reassemble(scramble(decompose(img), perm))
