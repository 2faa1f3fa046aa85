"""Synthetic grayscale test images.

Stand-ins for the medical scans used in the evaluation: a head-like phantom
(dark background, bright anatomy, soft texture) and a gradient with texture.
"""

from __future__ import annotations

import numpy as np

# (intensity, centre_x, centre_y, semi_axis_x, semi_axis_y, angle_deg) on [-1, 1]^2.
_ELLIPSES = [
    (220, 0.0, 0.0, 0.69, 0.92, 0),
    (-90, 0.0, -0.0184, 0.6624, 0.874, 0),
    (-40, 0.22, 0.0, 0.11, 0.31, -18),
    (-40, -0.22, 0.0, 0.16, 0.41, 18),
    (35, 0.0, 0.35, 0.21, 0.25, 0),
    (25, 0.0, 0.1, 0.046, 0.046, 0),
    (25, -0.08, -0.605, 0.046, 0.023, 0),
    (30, 0.06, -0.605, 0.023, 0.046, 0),
]


def phantom(size: int = 256, noise: float = 6.0, seed: int = 0) -> np.ndarray:
    """Ellipse phantom with additive Gaussian texture, as uint8."""
    yy, xx = np.mgrid[-1 : 1 : size * 1j, -1 : 1 : size * 1j]
    img = np.zeros((size, size))
    for val, cx, cy, ax, ay, ang in _ELLIPSES:
        t = np.deg2rad(ang)
        xr = (xx - cx) * np.cos(t) + (yy - cy) * np.sin(t)
        yr = -(xx - cx) * np.sin(t) + (yy - cy) * np.cos(t)
        img[(xr / ax) ** 2 + (yr / ay) ** 2 <= 1.0] += val
    rng = np.random.default_rng(seed)
    inside = img > 0
    img[inside] += rng.normal(0.0, noise, inside.sum())
    return np.clip(np.rint(img), 0, 255).astype(np.uint8)


def gradient_texture(width: int = 256, height: int = 256, seed: int = 0) -> np.ndarray:
    """Diagonal ramp plus sinusoidal texture and mild noise."""
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    ramp = 255.0 * (xx / max(width - 1, 1) + yy / max(height - 1, 1)) / 2.0
    texture = 20.0 * np.sin(xx / 5.0) * np.cos(yy / 7.0)
    rng = np.random.default_rng(seed)
    img = ramp + texture + rng.normal(0.0, 3.0, ramp.shape)
    return np.clip(np.rint(img), 0, 255).astype(np.uint8)


def random_image(width: int, height: int, seed: int = 0) -> np.ndarray:
    return np.random.default_rng(seed).integers(0, 256, size=(height, width), dtype=np.uint8)
