"""Chaos-based grayscale image encryption with bit-plane scrambling,
quantum-logistic XOR diffusion and DNA-encoded confusion, plus the usual
security-analysis metrics."""

from .analysis import (
    AnalysisReport,
    analyze,
    chi_square,
    correlation,
    cp_attack_test,
    entropy,
    error_metrics,
    key_sensitivity_test,
    kp_attack_test,
    npcr,
    uaci,
)
from .cipher import (
    CipherContext,
    KeySet,
    decrypt,
    derive_context,
    encrypt,
    fingerprint,
    keygen,
    parse_key,
    serialize_key,
)
from .imageio import read_image, write_image

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport",
    "CipherContext",
    "KeySet",
    "analyze",
    "chi_square",
    "correlation",
    "cp_attack_test",
    "decrypt",
    "derive_context",
    "encrypt",
    "entropy",
    "error_metrics",
    "fingerprint",
    "key_sensitivity_test",
    "keygen",
    "kp_attack_test",
    "npcr",
    "parse_key",
    "read_image",
    "serialize_key",
    "uaci",
    "write_image",
]
