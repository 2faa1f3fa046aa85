"""Key handling and the end-to-end encryption pipeline.

Encryption order::

    bit planes -> permute planes (bp_key) -> bytes
    -> XOR with the selected quantum logistic key matrix
    -> DNA encode (data rules) -> DNA XOR with DNA encoded hybrid key (key rules)
    -> DNA decode (output rules)

Decryption runs the same stages backwards.  Every stage is a bijection given
the key, so ``decrypt(encrypt(x, k), k) == x`` exactly.
"""

from __future__ import annotations

import hashlib
import math
import os
from dataclasses import dataclass, field, replace

import numpy as np

from . import chaos
from .bitplane import as_gray_image, inverse_permutation, scramble_image
from .chaos import (
    DEFAULT_BURN_IN,
    DEFAULT_EPS1,
    DEFAULT_EPS2,
    HenonParams,
    HybridParams,
    QuantumLogisticParams,
)
from .dna import decode, encode, rule_from_key, xor_planes
from .qsim import diffuse

KEY_FORMAT_VERSION = 1
N_SUBKEYS = 18

# Sub-key scaling into the quantum logistic seed domains.
QLOG_Y_SCALE = 0.1
QLOG_Z_SCALE = 0.2
# Keeps Henon seeds inside the attractor's basin for alpha=1.4, beta=0.3.
HENON_Y_SCALE = 0.2


class InvalidKeyError(ValueError):
    """Base class for key problems; ``field`` names the offending entry."""

    def __init__(self, message: str, field_name: str | None = None):
        super().__init__(message)
        self.field = field_name


class KeyParseError(InvalidKeyError):
    pass


class KeyRangeError(InvalidKeyError):
    pass


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all n below 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _open_unit(name: str, v: float) -> None:
    if not (isinstance(v, (int, float)) and 0.0 < v < 1.0):
        raise KeyRangeError(f"{name} must lie in (0, 1), got {v!r}", name)


@dataclass(frozen=True)
class KeySet:
    """The complete secret: 18 sub-keys, the shared seed and map settings.

    Sub-key roles: k1, k2 seed the Henon map (with ``r``); k3-k5 seed the
    quantum logistic map; k6-k9, k11-k14 and k15-k18 pick the DNA rules for
    data, key and output planes; k10 seeds the hybrid map.
    """

    k: tuple[float, ...]
    r: float
    eps1: int = DEFAULT_EPS1
    eps2: int = DEFAULT_EPS2
    alpha: float = 1.4
    beta: float = 0.3
    eta: float = 3.99
    gamma: float = 6.0
    hybrid_r: float = 1.0
    burn_in: int = DEFAULT_BURN_IN
    version: int = field(default=KEY_FORMAT_VERSION)

    def __post_init__(self):
        object.__setattr__(self, "k", tuple(float(v) for v in self.k))
        if len(self.k) != N_SUBKEYS:
            raise KeyRangeError(f"expected {N_SUBKEYS} sub-keys, got {len(self.k)}", "k")
        for i, v in enumerate(self.k, start=1):
            _open_unit(f"k{i}", v)
        _open_unit("r", self.r)
        for name in ("eps1", "eps2"):
            v = getattr(self, name)
            if int(v) != v or not is_prime(int(v)):
                raise KeyRangeError(f"{name} must be a positive prime, got {v!r}", name)
        if not 0.0 < self.alpha <= 1.5:
            raise KeyRangeError(f"alpha must lie in (0, 1.5], got {self.alpha}", "alpha")
        if not 0.0 < self.beta <= 0.5:
            raise KeyRangeError(f"beta must lie in (0, 0.5], got {self.beta}", "beta")
        if not 0.0 < self.eta <= 4.0:
            raise KeyRangeError(f"eta must lie in (0, 4], got {self.eta}", "eta")
        if not self.gamma >= 6.0 or math.isinf(self.gamma):
            raise KeyRangeError(f"gamma must be finite and >= 6, got {self.gamma}", "gamma")
        if not 0.6 <= self.hybrid_r <= 1.2:
            raise KeyRangeError(f"hybrid_r must lie in [0.6, 1.2], got {self.hybrid_r}", "hybrid_r")
        if int(self.burn_in) != self.burn_in or self.burn_in < 0:
            raise KeyRangeError(f"burn_in must be a nonnegative integer, got {self.burn_in}", "burn_in")
        if self.version != KEY_FORMAT_VERSION:
            raise KeyRangeError(f"unsupported key format version {self.version}", "version")

    def sub(self, i: int) -> float:
        """1-based sub-key accessor: ``key.sub(3)`` is k3."""
        return self.k[i - 1]

    @property
    def henon(self) -> HenonParams:
        x0 = math.fmod(self.sub(1) + self.r, 1.0)
        return HenonParams(x0, HENON_Y_SCALE * self.sub(2), self.alpha, self.beta, self.burn_in)

    @property
    def qlog(self) -> QuantumLogisticParams:
        return QuantumLogisticParams(
            self.sub(3),
            QLOG_Y_SCALE * self.sub(4),
            QLOG_Z_SCALE * self.sub(5),
            self.eta,
            self.gamma,
            self.burn_in,
        )

    @property
    def hybrid(self) -> HybridParams:
        return HybridParams(self.sub(10), self.hybrid_r, self.burn_in)

    def secret_parameters(self) -> dict[str, float]:
        """Initial conditions and control parameters of the three maps."""
        h, q, y = self.henon, self.qlog, self.hybrid
        return {
            "henon_x0": h.x0,
            "henon_y0": h.y0,
            "henon_alpha": h.alpha,
            "henon_beta": h.beta,
            "hybrid_x0": y.x0,
            "hybrid_r": y.r,
            "qlog_x0": q.x0,
            "qlog_y0": q.y0,
            "qlog_z0": q.z0,
            "qlog_eta": q.eta,
            "qlog_gamma": q.gamma,
        }

    def key_space_bits(self, precision_bits: int = 52) -> int:
        return precision_bits * len(self.secret_parameters())

    def with_qlog_y0(self, y0: float) -> "KeySet":
        """Copy of this key whose quantum logistic y0 equals ``y0``."""
        k = list(self.k)
        k[3] = y0 / QLOG_Y_SCALE
        return replace(self, k=tuple(k))


def rules_for(key: KeySet, first: int) -> tuple[int, int, int, int]:
    return tuple(rule_from_key(key.sub(i)) for i in range(first, first + 4))


@dataclass(frozen=True)
class CipherContext:
    bp_key: tuple[int, ...]
    selector: int
    key_matrices: tuple[np.ndarray, np.ndarray, np.ndarray]
    hybrid_key: np.ndarray
    data_rules: tuple[int, int, int, int]
    key_rules: tuple[int, int, int, int]
    out_rules: tuple[int, int, int, int]

    @property
    def shape(self) -> tuple[int, int]:
        return self.hybrid_key.shape

    @property
    def diffusion_key(self) -> np.ndarray:
        return self.key_matrices[self.selector]


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def derive_context(key: KeySet, w: int, h: int) -> CipherContext:
    """Expand ``key`` into all the key material for a ``w`` x ``h`` image."""
    if w < 1 or h < 1:
        raise ValueError(f"invalid image size {w}x{h}")
    n = w * h
    bp_key = tuple(chaos.derive_bitplane_key(key.henon))
    selector = chaos.derive_selector_key(key.henon)
    q = chaos.quantum_logistic_sequence(key.qlog, n)
    mats = tuple(
        _frozen(chaos.derive_key_matrix(q[:, j], key.eps1, key.eps2, w, h)) for j in range(3)
    )
    hk = chaos.derive_key_matrix(chaos.hybrid_sequence(key.hybrid, n), key.eps1, key.eps2, w, h)
    return CipherContext(
        bp_key=bp_key,
        selector=selector,
        key_matrices=mats,
        hybrid_key=_frozen(hk),
        data_rules=rules_for(key, 6),
        key_rules=rules_for(key, 11),
        out_rules=rules_for(key, 15),
    )


def _context_for(img: np.ndarray, key: KeySet, context: CipherContext | None) -> CipherContext:
    h, w = img.shape
    if context is None:
        return derive_context(key, w, h)
    if context.shape != img.shape:
        raise ValueError(f"context built for {context.shape}, image is {img.shape}")
    return context


def encrypt(img, key: KeySet, context: CipherContext | None = None) -> np.ndarray:
    img = as_gray_image(img)
    ctx = _context_for(img, key, context)
    scrambled = scramble_image(img, ctx.bp_key)
    diffused = diffuse(scrambled, ctx.diffusion_key)
    dn = encode(diffused, ctx.data_rules)
    dk = encode(ctx.hybrid_key, ctx.key_rules)
    return decode(xor_planes(dn, dk), ctx.out_rules)


def decrypt(cimg, key: KeySet, context: CipherContext | None = None) -> np.ndarray:
    cimg = as_gray_image(cimg)
    ctx = _context_for(cimg, key, context)
    dx = encode(cimg, ctx.out_rules)
    dk = encode(ctx.hybrid_key, ctx.key_rules)
    diffused = decode(xor_planes(dx, dk), ctx.data_rules)
    scrambled = diffuse(diffused, ctx.diffusion_key)
    return scramble_image(scrambled, inverse_permutation(ctx.bp_key))


# --------------------------------------------------------------------------
# key generation


class _UnitStream:
    """Deterministic doubles in (0, 1) expanded from a seed with SHAKE-256."""

    def __init__(self, seed: bytes):
        self._seed = seed
        self._counter = 0

    def next(self) -> float:
        block = hashlib.shake_256(
            b"qmedshield/keygen/" + self._seed + self._counter.to_bytes(8, "big")
        ).digest(8)
        self._counter += 1
        # 53 random bits, offset by half an ulp so 0 and 1 are unreachable.
        return ((int.from_bytes(block, "big") >> 11) + 0.5) / 2.0**53


def _maps_stay_bounded(key: KeySet) -> bool:
    try:
        chaos.henon_sequence(key.henon, 64)
        chaos.quantum_logistic_sequence(key.qlog, 64)
    except chaos.ChaosError:
        return False
    return True


def keygen(seed: bytes | None = None, max_attempts: int = 1000) -> KeySet:
    """Expand a 32-byte seed into a KeySet; ``None`` draws one from os.urandom.

    Candidates whose chaotic orbits diverge are discarded and redrawn from
    the same deterministic stream.
    """
    if seed is None:
        seed = os.urandom(32)
    seed = bytes(seed)
    if len(seed) != 32:
        raise ValueError(f"keygen seed must be 32 bytes, got {len(seed)}")
    u = _UnitStream(seed)
    for _ in range(max_attempts):
        key = KeySet(
            k=tuple(u.next() for _ in range(N_SUBKEYS)),
            r=u.next(),
            gamma=6.0 + 2.0 * u.next(),
            hybrid_r=0.6 + 0.6 * u.next(),
        )
        if _maps_stay_bounded(key):
            return key
    raise RuntimeError("could not draw a non-divergent key")  # pragma: no cover


# --------------------------------------------------------------------------
# key file format

_FLOAT_FIELDS = ("r", "alpha", "beta", "eta", "gamma", "hybrid_r")
_INT_FIELDS = ("version", "eps1", "eps2", "burn_in")
FIELD_ORDER = (
    ("version",)
    + tuple(f"k{i}" for i in range(1, N_SUBKEYS + 1))
    + ("r", "eps1", "eps2", "alpha", "beta", "eta", "gamma", "hybrid_r", "burn_in")
)


def _fmt(v: float) -> str:
    return format(v, ".17g")


def serialize_key(key: KeySet) -> str:
    lines = ["# qmedshield key file", f"version = {key.version}"]
    lines += [f"k{i} = {_fmt(v)}" for i, v in enumerate(key.k, start=1)]
    lines += [
        f"r = {_fmt(key.r)}",
        f"eps1 = {key.eps1}",
        f"eps2 = {key.eps2}",
        f"alpha = {_fmt(key.alpha)}",
        f"beta = {_fmt(key.beta)}",
        f"eta = {_fmt(key.eta)}",
        f"gamma = {_fmt(key.gamma)}",
        f"hybrid_r = {_fmt(key.hybrid_r)}",
        f"burn_in = {key.burn_in}",
    ]
    return "\n".join(lines) + "\n"


def parse_key(text: str) -> KeySet:
    """Parse the ``name = value`` key format and validate every field."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, value = (s.strip() for s in line.partition("="))
        if not sep or not name or not value:
            raise KeyParseError(f"line {lineno}: expected 'name = value', got {raw!r}", name or None)
        if name not in FIELD_ORDER:
            raise KeyParseError(f"line {lineno}: unknown field {name!r}", name)
        if name in values:
            raise KeyParseError(f"line {lineno}: duplicate field {name!r}", name)
        values[name] = value
    for name in FIELD_ORDER:
        if name not in values:
            raise KeyParseError(f"missing field {name!r}", name)

    def conv(name: str):
        s = values[name]
        try:
            if name in _INT_FIELDS:
                return int(s)
            v = float(s)
        except ValueError:
            raise KeyParseError(f"field {name!r}: cannot parse {s!r}", name) from None
        if not math.isfinite(v):
            raise KeyRangeError(f"field {name!r} must be finite", name)
        return v

    kwargs = {name: conv(name) for name in _FLOAT_FIELDS + _INT_FIELDS}
    ks = tuple(conv(f"k{i}") for i in range(1, N_SUBKEYS + 1))
    return KeySet(k=ks, **kwargs)


def fingerprint(key: KeySet) -> str:
    """SHA-256 of the canonical serialisation, hex encoded."""
    return hashlib.sha256(serialize_key(key).encode("utf-8")).hexdigest()
