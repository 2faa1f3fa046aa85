"""DNA encoding of byte images and the base-level XOR.

A byte splits into four dibits; dibit ``j`` (bits ``2j+1, 2j``) lands in
plane ``j``, so plane 3 carries the most significant pair.  Bases are held as
small integer codes in the canonical order A, C, G, T.
"""

from __future__ import annotations

import numpy as np

from .bitplane import as_gray_image

BASES = "ACGT"
_CODE = {b: i for i, b in enumerate(BASES)}

# Rule number -> bases for dibits 00, 01, 10, 11 (rules iii and vii coincide).
RULES: dict[int, str] = {
    1: "AGCT",
    2: "CATG",
    3: "TGCA",
    4: "ACGT",
    5: "GTAC",
    6: "CTAG",
    7: "TGCA",
    8: "GATC",
}

# XOR truth table, rows then columns in the order printed: row base -> {column base: result}.
XOR_TABLE: dict[str, dict[str, str]] = {
    "T": dict(zip("AGTC", "TCAG")),
    "G": dict(zip("AGTC", "GACT")),
    "A": dict(zip("AGTC", "AGTC")),
    "C": dict(zip("AGTC", "CTGA")),
}

_XOR_CODES = np.array(
    [[_CODE[XOR_TABLE[a][b]] for b in BASES] for a in BASES], dtype=np.uint8
)


class InvalidRuleError(ValueError):
    pass


def _rule_arrays(rule: int) -> tuple[np.ndarray, np.ndarray]:
    if rule not in RULES:
        raise InvalidRuleError(f"DNA rule must be an integer in 1..8, got {rule!r}")
    enc = np.array([_CODE[b] for b in RULES[rule]], dtype=np.uint8)
    dec = np.empty(4, dtype=np.uint8)
    dec[enc] = np.arange(4, dtype=np.uint8)
    return enc, dec


def _check_rules(rules) -> tuple[int, ...]:
    rules = tuple(rules)
    if len(rules) != 4:
        raise InvalidRuleError(f"need one rule per dibit plane (4), got {len(rules)}")
    for r in rules:
        _rule_arrays(r)
    return rules


def rule_from_key(k: float) -> int:
    """Rule number ``1 + floor(frac(k) * 8)``, clamped to ``1..8``."""
    frac = float(k) % 1.0
    return min(1 + int(frac * 8.0), 8)


def encode(img, rules) -> np.ndarray:
    """Encode an image as a ``(4, H, W)`` array of base codes."""
    img = as_gray_image(img)
    rules = _check_rules(rules)
    out = np.empty((4,) + img.shape, dtype=np.uint8)
    for j, rule in enumerate(rules):
        enc, _ = _rule_arrays(rule)
        out[j] = enc[(img >> (2 * j)) & 3]
    return out


def _check_planes(planes) -> np.ndarray:
    planes = np.asarray(planes)
    if planes.ndim != 3 or planes.shape[0] != 4:
        raise ValueError(f"expected 4 DNA planes, got shape {planes.shape}")
    if planes.size and planes.max() > 3:
        raise ValueError("DNA plane codes must lie in 0..3")
    return planes.astype(np.uint8, copy=False)


def decode(planes, rules) -> np.ndarray:
    """Exact inverse of :func:`encode` under the same rules."""
    planes = _check_planes(planes)
    rules = _check_rules(rules)
    out = np.zeros(planes.shape[1:], dtype=np.uint8)
    for j, rule in enumerate(rules):
        _, dec = _rule_arrays(rule)
        out |= dec[planes[j]] << (2 * j)
    return out


def dna_xor(a: str, b: str) -> str:
    try:
        return XOR_TABLE[a][b]
    except KeyError:
        raise ValueError(f"invalid bases {a!r}, {b!r}") from None


def xor_planes(a, b) -> np.ndarray:
    a, b = _check_planes(a), _check_planes(b)
    if a.shape != b.shape:
        raise ValueError(f"DNA plane shapes differ: {a.shape} vs {b.shape}")
    return _XOR_CODES[a, b]


def planes_to_strings(planes) -> list[list[str]]:
    """Render base codes as letters, one string per image row, per plane."""
    planes = _check_planes(planes)
    lut = np.array(list(BASES))
    return [["".join(row) for row in lut[p]] for p in planes]
