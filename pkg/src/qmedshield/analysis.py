"""Security metrics and attack simulations for plain/cipher image pairs."""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import asdict, dataclass
from typing import Callable, NamedTuple

import numpy as np

from .bitplane import as_gray_image
from .cipher import KeySet, decrypt, derive_context, encrypt

CHI2_CRITICAL = 293.0  # chi-square critical value at 255 dof, alpha = 0.05
DIRECTIONS = ("horizontal", "vertical", "diagonal")
REPORT_SCHEMA_ID = "qmedshield.analysis/1"


class ZeroVarianceError(ValueError):
    pass


class ChiSquare(NamedTuple):
    statistic: float
    passed: bool


class ErrorMetrics(NamedTuple):
    mae: float
    rmse: float
    psnr: float


def _same_shape(a, b) -> tuple[np.ndarray, np.ndarray]:
    a, b = as_gray_image(a), as_gray_image(b)
    if a.shape != b.shape:
        raise ValueError(f"image shapes differ: {a.shape} vs {b.shape}")
    return a, b


def histogram(img) -> np.ndarray:
    return np.bincount(as_gray_image(img).ravel(), minlength=256)


def chi_square(img) -> ChiSquare:
    img = as_gray_image(img)
    n = img.size
    if n < 256:
        warnings.warn(
            f"chi-square on {n} pixels (< 256) has expected counts below 1",
            RuntimeWarning,
            stacklevel=2,
        )
    expected = n / 256.0
    obs = histogram(img).astype(np.float64)
    stat = float(np.sum((obs - expected) ** 2) / expected)
    return ChiSquare(stat, stat < CHI2_CRITICAL)


def adjacent_pairs(img, direction: str) -> tuple[np.ndarray, np.ndarray]:
    img = as_gray_image(img)
    if direction == "horizontal":
        a, b = img[:, :-1], img[:, 1:]
    elif direction == "vertical":
        a, b = img[:-1, :], img[1:, :]
    elif direction == "diagonal":
        a, b = img[:-1, :-1], img[1:, 1:]
    else:
        raise ValueError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
    return a.ravel().astype(np.float64), b.ravel().astype(np.float64)


def correlation(img, direction: str = "horizontal", literal: bool = False) -> float:
    """Correlation of every adjacent pixel pair along ``direction``.

    With ``literal=True`` the covariance is divided by the product of the
    variances rather than by the product of standard deviations.
    """
    x, y = adjacent_pairs(img, direction)
    if x.size < 2:
        raise ValueError(f"not enough {direction} pixel pairs")
    dx, dy = x - x.mean(), y - y.mean()
    vx, vy = np.mean(dx * dx), np.mean(dy * dy)
    if vx == 0.0 or vy == 0.0:
        raise ZeroVarianceError(f"zero variance along {direction} direction")
    cov = np.mean(dx * dy)
    if literal:
        return float(cov / (vx * vy))
    return float(np.clip(cov / math.sqrt(vx * vy), -1.0, 1.0))


def correlations(img, literal: bool = False) -> dict[str, float | None]:
    """All three directions; ``None`` where a direction has zero variance."""
    out: dict[str, float | None] = {}
    for d in DIRECTIONS:
        try:
            out[d] = correlation(img, d, literal)
        except ZeroVarianceError:
            out[d] = None
    return out


def npcr(c1, c2) -> float:
    """Percentage of pixel positions whose values differ."""
    a, b = _same_shape(c1, c2)
    return float(np.count_nonzero(a != b) * 100.0 / a.size)


def uaci(c1, c2) -> float:
    a, b = _same_shape(c1, c2)
    diff = np.abs(a.astype(np.int16) - b.astype(np.int16))
    return float(diff.sum() * 100.0 / (255.0 * a.size))


def entropy(img) -> float:
    """Shannon entropy in bits over all 256 grey levels."""
    h = histogram(img)
    p = h[h > 0] / h.sum()
    return float(max(0.0, -np.sum(p * np.log2(p))))


def error_metrics(plain, cipher) -> ErrorMetrics:
    """MAE, RMSE and PSNR (dB); PSNR is ``inf`` for identical images."""
    a, b = _same_shape(plain, cipher)
    d = b.astype(np.float64) - a.astype(np.float64)
    mae = float(np.mean(np.abs(d)))
    mse = float(np.mean(d * d))
    psnr = math.inf if mse == 0.0 else 10.0 * math.log10(255.0**2 / mse)
    return ErrorMetrics(mae, math.sqrt(mse), psnr)


# --------------------------------------------------------------------------
# attack simulations

Encryptor = Callable[[np.ndarray, KeySet], np.ndarray]


@dataclass
class KnownPlaintextResult:
    passed: bool
    black_entropy: float
    white_entropy: float
    black_chi_square: float
    white_chi_square: float


def kp_attack_test(
    key: KeySet, size: int = 256, encrypt_fn: Encryptor = encrypt, min_entropy: float = 7.9
) -> KnownPlaintextResult:
    """Encrypt all-black and all-white images and check they look uniform."""
    if encrypt_fn is encrypt:
        ctx = derive_context(key, size, size)
        encrypt_fn = lambda m, k: encrypt(m, k, ctx)  # noqa: E731
    results = []
    for level in (0, 255):
        c = encrypt_fn(np.full((size, size), level, dtype=np.uint8), key)
        results.append((entropy(c), chi_square(c)))
    (eb, cb), (ew, cw) = results
    passed = eb > min_entropy and ew > min_entropy and cb.passed and cw.passed
    return KnownPlaintextResult(passed, eb, ew, cb.statistic, cw.statistic)


@dataclass
class ChosenPlaintextResult:
    passed: bool
    violation_rate: float
    degenerate: bool


def cp_attack_test(
    m1, m2, key: KeySet, encrypt_fn: Encryptor = encrypt, threshold: float = 99.0
) -> ChosenPlaintextResult:
    """Check whether ``m1 ^ m2 == c1 ^ c2`` fails on enough pixels.

    ``violation_rate`` is the percentage of pixels where the XOR relation
    does not hold.  Identical plaintexts force equality everywhere; that case
    is flagged as degenerate and not counted as a failure.
    """
    m1, m2 = _same_shape(m1, m2)
    if np.array_equal(m1, m2):
        return ChosenPlaintextResult(True, 0.0, True)
    c1, c2 = encrypt_fn(m1, key), encrypt_fn(m2, key)
    holds = (m1 ^ m2) == (np.asarray(c1, np.uint8) ^ np.asarray(c2, np.uint8))
    rate = float(np.count_nonzero(~holds) * 100.0 / m1.size)
    return ChosenPlaintextResult(rate >= threshold, rate, False)


def key_sensitivity_test(img, key: KeySet, perturbation: float) -> float:
    """NPCR between decryptions under the true key and a y0-perturbed key."""
    img = as_gray_image(img)
    cipher = encrypt(img, key)
    good = decrypt(cipher, key)
    if perturbation == 0:
        return npcr(good, good)
    wrong_key = key.with_qlog_y0(key.qlog.y0 + perturbation)
    return npcr(good, decrypt(cipher, wrong_key))


def one_pixel_variant(img, pos: tuple[int, int] | None = None) -> tuple[np.ndarray, tuple[int, int]]:
    """Copy of ``img`` with one pixel (the centre by default) changed by +1 mod 256."""
    img = as_gray_image(img)
    if pos is None:
        pos = (img.shape[0] // 2, img.shape[1] // 2)
    out = img.copy()
    out[pos] = (int(out[pos]) + 1) % 256
    return out, pos


# --------------------------------------------------------------------------
# report


@dataclass
class AnalysisReport:
    width: int
    height: int
    cipher_matches_key: bool
    histogram_plain: list[int]
    histogram_cipher: list[int]
    chi_square_plain: ChiSquare
    chi_square_cipher: ChiSquare
    correlation_plain: dict[str, float | None]
    correlation_cipher: dict[str, float | None]
    differential_npcr: float
    differential_uaci: float
    differential_pixel: tuple[int, int]
    plain_vs_cipher_npcr: float
    plain_vs_cipher_uaci: float
    entropy_plain: float
    entropy_cipher: float
    errors: ErrorMetrics
    known_plaintext: KnownPlaintextResult
    chosen_plaintext: ChosenPlaintextResult
    key_sensitivity_perturbation: float
    key_sensitivity_npcr: float
    key_space_bits: int

    def to_dict(self) -> dict:
        def chi(c: ChiSquare) -> dict:
            return {"statistic": c.statistic, "pass": bool(c.passed)}

        psnr = self.errors.psnr
        return {
            "schema": REPORT_SCHEMA_ID,
            "width": self.width,
            "height": self.height,
            "cipher_matches_key": self.cipher_matches_key,
            "histogram": {"plain": self.histogram_plain, "cipher": self.histogram_cipher},
            "chi_square": {
                "critical_value": CHI2_CRITICAL,
                "plain": chi(self.chi_square_plain),
                "cipher": chi(self.chi_square_cipher),
            },
            "correlation": {"plain": self.correlation_plain, "cipher": self.correlation_cipher},
            "differential": {
                "npcr": self.differential_npcr,
                "uaci": self.differential_uaci,
                "pixel": list(self.differential_pixel),
            },
            "plain_vs_cipher": {"npcr": self.plain_vs_cipher_npcr, "uaci": self.plain_vs_cipher_uaci},
            "entropy": {"plain": self.entropy_plain, "cipher": self.entropy_cipher},
            "error_metrics": {
                "mae": self.errors.mae,
                "rmse": self.errors.rmse,
                "psnr": "Infinity" if math.isinf(psnr) else psnr,
            },
            "known_plaintext": {
                "pass": self.known_plaintext.passed,
                **{k: v for k, v in asdict(self.known_plaintext).items() if k != "passed"},
            },
            "chosen_plaintext": {
                "pass": self.chosen_plaintext.passed,
                "violation_rate": self.chosen_plaintext.violation_rate,
                "degenerate": self.chosen_plaintext.degenerate,
            },
            "key_sensitivity": {
                "perturbation": self.key_sensitivity_perturbation,
                "npcr": self.key_sensitivity_npcr,
            },
            "key_space_bits": self.key_space_bits,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def summary_rows(self) -> list[tuple[str, str, str]]:
        """``(metric, value, verdict)`` rows for a console table."""
        def fmt(v):
            return "n/a" if v is None else f"{v:.4f}"

        rows = [
            ("chi-square (cipher)", f"{self.chi_square_cipher.statistic:.2f}",
             "PASS" if self.chi_square_cipher.passed else "FAIL"),
            ("entropy plain / cipher", f"{self.entropy_plain:.4f} / {self.entropy_cipher:.4f}",
             "PASS" if self.entropy_cipher > 7.99 else "FAIL"),
        ]
        for d in DIRECTIONS:
            c = self.correlation_cipher[d]
            rows.append((f"correlation {d} plain / cipher",
                         f"{fmt(self.correlation_plain[d])} / {fmt(c)}",
                         "PASS" if c is not None and abs(c) < 0.05 else "FAIL"))
        rows += [
            ("NPCR / UACI one-pixel diff", f"{self.differential_npcr:.4f} / {self.differential_uaci:.4f}", "INFO"),
            ("NPCR / UACI plain vs cipher", f"{self.plain_vs_cipher_npcr:.2f} / {self.plain_vs_cipher_uaci:.2f}", "INFO"),
            ("MAE / RMSE / PSNR", f"{self.errors.mae:.2f} / {self.errors.rmse:.2f} / {self.errors.psnr:.2f}", "INFO"),
            ("known-plaintext (black/white)", f"H={self.known_plaintext.black_entropy:.4f}/{self.known_plaintext.white_entropy:.4f}",
             "PASS" if self.known_plaintext.passed else "FAIL"),
            ("chosen-plaintext violation %", f"{self.chosen_plaintext.violation_rate:.2f}",
             "PASS" if self.chosen_plaintext.passed else "FAIL"),
            ("key sensitivity NPCR", f"{self.key_sensitivity_npcr:.2f}",
             "PASS" if self.key_sensitivity_npcr > 99.0 else "FAIL"),
        ]
        return rows


def analyze(
    plain,
    cipher,
    key: KeySet,
    cp_partner=None,
    perturbation: float = -0.045,
    kp_size: int = 256,
) -> AnalysisReport:
    """Run the full metric battery on one plain/cipher pair.

    ``cp_partner`` is the second chosen plaintext; by default a pseudo-random
    image seeded from the plaintext's size is used.  ``perturbation`` shifts
    the quantum logistic y0 for the key-sensitivity check (the default moves
    0.05 to 0.005); it is clamped so the perturbed y0 stays in range.
    """
    plain, cipher = _same_shape(plain, cipher)
    h, w = plain.shape
    ctx = derive_context(key, w, h)
    c1 = encrypt(plain, key, ctx)
    matches = bool(np.array_equal(c1, cipher))

    variant, pos = one_pixel_variant(plain)
    c2 = encrypt(variant, key, ctx)

    if cp_partner is None:
        rng = np.random.default_rng(w * 100003 + h)
        cp_partner = rng.integers(0, 256, size=plain.shape, dtype=np.uint8)
    cp = cp_attack_test(plain, cp_partner, key, lambda m, k: encrypt(m, k, ctx))

    y0 = key.qlog.y0
    target = min(max(y0 + perturbation, 1e-6), 0.1)
    ks = key_sensitivity_test(plain, key, target - y0)

    return AnalysisReport(
        width=w,
        height=h,
        cipher_matches_key=matches,
        histogram_plain=histogram(plain).tolist(),
        histogram_cipher=histogram(cipher).tolist(),
        chi_square_plain=chi_square(plain),
        chi_square_cipher=chi_square(cipher),
        correlation_plain=correlations(plain),
        correlation_cipher=correlations(cipher),
        differential_npcr=npcr(c1, c2),
        differential_uaci=uaci(c1, c2),
        differential_pixel=pos,
        plain_vs_cipher_npcr=npcr(plain, cipher),
        plain_vs_cipher_uaci=uaci(plain, cipher),
        entropy_plain=entropy(plain),
        entropy_cipher=entropy(cipher),
        errors=error_metrics(plain, cipher),
        known_plaintext=kp_attack_test(key, kp_size),
        chosen_plaintext=cp,
        key_sensitivity_perturbation=target - y0,
        key_sensitivity_npcr=ks,
        key_space_bits=key.key_space_bits(),
    )


_NUM = {"type": "number"}
_NUM_OR_NULL = {"type": ["number", "null"]}
_DIRS = {
    "type": "object",
    "properties": {d: _NUM_OR_NULL for d in DIRECTIONS},
    "required": list(DIRECTIONS),
    "additionalProperties": False,
}
_HIST = {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 256, "maxItems": 256}
_CHI = {
    "type": "object",
    "properties": {"statistic": {"type": "number", "minimum": 0}, "pass": {"type": "boolean"}},
    "required": ["statistic", "pass"],
}
_PCT = {"type": "number", "minimum": 0, "maximum": 100}
_ENT = {"type": "number", "minimum": 0, "maximum": 8}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "qmedshield analysis report",
    "type": "object",
    "required": [
        "schema", "width", "height", "cipher_matches_key", "histogram", "chi_square",
        "correlation", "differential", "plain_vs_cipher", "entropy", "error_metrics",
        "known_plaintext", "chosen_plaintext", "key_sensitivity", "key_space_bits",
    ],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": REPORT_SCHEMA_ID},
        "width": {"type": "integer", "minimum": 1},
        "height": {"type": "integer", "minimum": 1},
        "cipher_matches_key": {"type": "boolean"},
        "histogram": {
            "type": "object",
            "properties": {"plain": _HIST, "cipher": _HIST},
            "required": ["plain", "cipher"],
        },
        "chi_square": {
            "type": "object",
            "properties": {"critical_value": _NUM, "plain": _CHI, "cipher": _CHI},
            "required": ["critical_value", "plain", "cipher"],
        },
        "correlation": {
            "type": "object",
            "properties": {"plain": _DIRS, "cipher": _DIRS},
            "required": ["plain", "cipher"],
        },
        "differential": {
            "type": "object",
            "properties": {
                "npcr": _PCT,
                "uaci": _PCT,
                "pixel": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
            },
            "required": ["npcr", "uaci", "pixel"],
        },
        "plain_vs_cipher": {
            "type": "object",
            "properties": {"npcr": _PCT, "uaci": _PCT},
            "required": ["npcr", "uaci"],
        },
        "entropy": {
            "type": "object",
            "properties": {"plain": _ENT, "cipher": _ENT},
            "required": ["plain", "cipher"],
        },
        "error_metrics": {
            "type": "object",
            "properties": {
                "mae": {"type": "number", "minimum": 0, "maximum": 255},
                "rmse": {"type": "number", "minimum": 0},
                "psnr": {"oneOf": [_NUM, {"const": "Infinity"}]},
            },
            "required": ["mae", "rmse", "psnr"],
        },
        "known_plaintext": {
            "type": "object",
            "properties": {
                "pass": {"type": "boolean"},
                "black_entropy": _ENT,
                "white_entropy": _ENT,
                "black_chi_square": _NUM,
                "white_chi_square": _NUM,
            },
            "required": ["pass", "black_entropy", "white_entropy", "black_chi_square", "white_chi_square"],
        },
        "chosen_plaintext": {
            "type": "object",
            "properties": {"pass": {"type": "boolean"}, "violation_rate": _PCT, "degenerate": {"type": "boolean"}},
            "required": ["pass", "violation_rate", "degenerate"],
        },
        "key_sensitivity": {
            "type": "object",
            "properties": {"perturbation": _NUM, "npcr": _PCT},
            "required": ["perturbation", "npcr"],
        },
        "key_space_bits": {"type": "integer"},
    },
}
