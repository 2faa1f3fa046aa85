"""Chaotic sequence generators and the key material derived from them.

Three systems drive the cipher:

* the 2D Henon map, source of the bit-plane permutation and the key selector;
* the hybrid logistic-sine map, source of the confusion key stream;
* the 3D quantum logistic map, source of the three diffusion key matrices.

All iteration happens in IEEE-754 double precision with plain Python
arithmetic, so a given parameter set reproduces the same stream bit for bit.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

DIVERGENCE_LIMIT = 1e6
IMAG_TOLERANCE = 1e-9
DEFAULT_BURN_IN = 1000

# Large primes for the byte quantisation of chaotic values.
DEFAULT_EPS1 = 100000000000031
DEFAULT_EPS2 = 7919


class ChaosError(ValueError):
    """Base class for chaotic-map failures."""


class DivergenceError(ChaosError):
    """An orbit left the bounded regime."""


class ImaginaryDriftError(ChaosError):
    """The quantum logistic orbit acquired a non-negligible imaginary part."""


class InsufficientSequenceError(ChaosError):
    pass


def _check_burn_in(burn_in: int) -> None:
    if int(burn_in) != burn_in or burn_in < 0:
        raise ValueError(f"burn_in must be a nonnegative integer, got {burn_in!r}")


def _check_count(n: int) -> None:
    if int(n) != n or n < 1:
        raise ValueError(f"sequence length must be >= 1, got {n!r}")


@dataclass(frozen=True)
class HenonParams:
    x0: float
    y0: float
    alpha: float = 1.4
    beta: float = 0.3
    burn_in: int = DEFAULT_BURN_IN

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.5:
            raise ValueError(f"alpha must lie in (0, 1.5], got {self.alpha}")
        if not 0.0 < self.beta <= 0.5:
            raise ValueError(f"beta must lie in (0, 0.5], got {self.beta}")
        _check_burn_in(self.burn_in)


@dataclass(frozen=True)
class HybridParams:
    x0: float
    r: float = 1.0
    burn_in: int = DEFAULT_BURN_IN

    def __post_init__(self):
        if not 0.0 < self.x0 < 1.0:
            raise ValueError(f"x0 must lie in (0, 1), got {self.x0}")
        if not 0.6 <= self.r <= 1.2:
            raise ValueError(f"r must lie in [0.6, 1.2], got {self.r}")
        _check_burn_in(self.burn_in)


@dataclass(frozen=True)
class QuantumLogisticParams:
    x0: float
    y0: float
    z0: float
    eta: float = 3.99
    gamma: float = 6.0
    burn_in: int = DEFAULT_BURN_IN

    def __post_init__(self):
        if not 0.0 < self.x0 <= 1.0:
            raise ValueError(f"x0 must lie in (0, 1], got {self.x0}")
        if not 0.0 < self.y0 <= 0.1:
            raise ValueError(f"y0 must lie in (0, 0.1], got {self.y0}")
        if not 0.0 < self.z0 <= 0.2:
            raise ValueError(f"z0 must lie in (0, 0.2], got {self.z0}")
        if not 0.0 < self.eta <= 4.0:
            raise ValueError(f"eta must lie in (0, 4], got {self.eta}")
        if not self.gamma >= 6.0:
            raise ValueError(f"gamma must be >= 6, got {self.gamma}")
        _check_burn_in(self.burn_in)


def henon_sequence(p: HenonParams, n: int) -> np.ndarray:
    """Return an ``(n, 2)`` array of Henon ``(x, y)`` pairs after burn-in.

    Raises DivergenceError if ``|x|`` exceeds ``DIVERGENCE_LIMIT``.
    """
    _check_count(n)
    a, b = p.alpha, p.beta
    x, y = float(p.x0), float(p.y0)
    out = np.empty((n, 2))
    total = p.burn_in + n
    for i in range(total):
        x, y = 1.0 - a * x * x + y, b * x
        if abs(x) > DIVERGENCE_LIMIT or math.isnan(x):
            raise DivergenceError(
                f"Henon orbit diverged at step {i + 1} (alpha={a}, beta={b})"
            )
        if i >= p.burn_in:
            out[i - p.burn_in] = x, y
    return out


def derive_bitplane_key(p: HenonParams) -> list[int]:
    """Rank order of the first 8 post-burn-in Henon x-values.

    Ties resolve by index (stable sort), so the result is always a
    permutation of ``0..7``.
    """
    xs = henon_sequence(p, 8)[:, 0]
    return permutation_from_values(xs)


def permutation_from_values(values) -> list[int]:
    return [int(i) for i in np.argsort(np.asarray(values), kind="stable")]


def selector_from_value(v: float) -> int:
    """Map a real to ``{0, 1, 2}`` via ``floor(frac(|v|) * 3)``."""
    frac = math.fmod(abs(v), 1.0)
    return min(int(math.floor(frac * 3.0)), 2)


def derive_selector_key(p: HenonParams) -> int:
    """Pick one of the three diffusion matrices.

    The selector value is the first post-burn-in y plus the eight x-values
    that feed :func:`derive_bitplane_key`.  Henon y alone stays below 0.4 in
    magnitude, which would almost never select the third matrix.
    """
    seq = henon_sequence(p, 8)
    return selector_from_value(float(seq[0, 1] + math.fsum(seq[:, 0])))


def hybrid_step(x: float, r: float) -> float:
    """One raw (unreduced) step of the hybrid logistic-sine map."""
    return r * x * (1.0 - x) + 4.0 * r * math.sin(math.pi * x / 4.0)


def hybrid_sequence(p: HybridParams, n: int) -> np.ndarray:
    """Iterate the hybrid logistic-sine map, reducing every iterate mod 1."""
    _check_count(n)
    r = p.r
    x = float(p.x0)
    out = np.empty(n)
    for i in range(p.burn_in + n):
        x = math.fmod(hybrid_step(x, r), 1.0)
        if i >= p.burn_in:
            out[i - p.burn_in] = x
    return out


def quantum_logistic_sequence(p: QuantumLogisticParams, n: int) -> np.ndarray:
    """Return an ``(n, 3)`` array of real ``(x, y, z)`` states after burn-in.

    The recurrence runs in complex arithmetic, conjugates included; with real
    seeds the imaginary parts must stay below ``IMAG_TOLERANCE``.
    """
    _check_count(n)
    eta = p.eta
    e1 = math.exp(-p.gamma)
    e2 = math.exp(-2.0 * p.gamma)
    x, y, z = complex(p.x0), complex(p.y0), complex(p.z0)
    out = np.empty((n, 3))
    for i in range(p.burn_in + n):
        xc, zc = x.conjugate(), z.conjugate()
        x, y, z = (
            eta * (x - abs(x) ** 2) - eta * y,
            -y * e2 + e1 * eta * ((2.0 - x - xc) * y - x * zc - xc * z),
            -z * e2 + e1 * eta * (2.0 * (1.0 - xc) * z - 2.0 * x * y - x),
        )
        big = max(abs(x), abs(y), abs(z))
        if big > DIVERGENCE_LIMIT or cmath.isnan(x):
            raise DivergenceError(
                f"quantum logistic orbit diverged at step {i + 1} "
                f"(eta={eta}, gamma={p.gamma})"
            )
        if max(abs(x.imag), abs(y.imag), abs(z.imag)) >= IMAG_TOLERANCE:
            raise ImaginaryDriftError(f"imaginary drift at step {i + 1}")
        if i >= p.burn_in:
            out[i - p.burn_in] = x.real, y.real, z.real
    return out


def derive_key_matrix(
    seq, eps1: int = DEFAULT_EPS1, eps2: int = DEFAULT_EPS2, w: int = 1, h: int = 1
) -> np.ndarray:
    """Quantise a chaotic sequence into an ``(h, w)`` uint8 key matrix.

    Entry ``[q, p]`` is ``floor(eps1 * seq[q*w + p] + eps2) mod 256``.
    """
    seq = np.asarray(seq, dtype=np.float64).ravel()
    if eps1 <= 0 or eps2 <= 0:
        raise ValueError("eps1 and eps2 must be positive primes")
    if w < 1 or h < 1:
        raise ValueError(f"invalid key matrix size {w}x{h}")
    need = w * h
    if seq.size < need:
        raise InsufficientSequenceError(
            f"need {need} chaotic values for a {w}x{h} key, got {seq.size}"
        )
    vals = np.floor(float(eps1) * seq[:need] + float(eps2))
    return np.mod(vals, 256.0).astype(np.uint8).reshape(h, w)
