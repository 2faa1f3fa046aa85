"""``qmedshield`` command-line interface.

Exit codes: 0 success, 2 usage, 3 I/O, 4 key error, 5 format error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import analysis, plotdata
from .chaos import ChaosError, QuantumLogisticParams
from .cipher import InvalidKeyError, fingerprint, keygen, parse_key, serialize_key
from .cipher import decrypt as _decrypt
from .cipher import encrypt as _encrypt
from .imageio import UnsupportedFormatError, read_image, write_image

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_KEY = 4
EXIT_FORMAT = 5

DEFAULT_MAX_SIZE = 4096


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _load_key(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError:
        raise CliError(f"key file {path} is not UTF-8 text", EXIT_KEY) from None
    return parse_key(text)


def _load_image(path: str, args) -> np.ndarray:
    img = read_image(path, convert=getattr(args, "convert", False))
    limit = getattr(args, "max_size", DEFAULT_MAX_SIZE)
    h, w = img.shape
    if w > limit or h > limit:
        raise UnsupportedFormatError(f"{path}: {w}x{h} exceeds the {limit}x{limit} limit")
    return img


def _parse_range(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise plotdata.InvalidRangeError(f"range must be LO:HI or LO:HI:STEPS, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
        steps = int(parts[2]) if len(parts) == 3 else 400
    except ValueError:
        raise plotdata.InvalidRangeError(f"cannot parse range {text!r}") from None
    return lo, hi, steps


# --------------------------------------------------------------------------
# commands


def cmd_keygen(args) -> int:
    seed = None
    if args.seed is not None:
        try:
            seed = bytes.fromhex(args.seed)
        except ValueError:
            raise CliError("--seed must be hexadecimal", EXIT_USAGE) from None
        if len(seed) != 32:
            raise CliError("--seed must be 64 hex digits (32 bytes)", EXIT_USAGE)
    key = keygen(seed)
    Path(args.out).write_text(serialize_key(key), encoding="utf-8")
    print(f"wrote {args.out}")
    print(f"fingerprint: {fingerprint(key)[:32]}")
    return EXIT_OK


def cmd_encrypt(args) -> int:
    key = _load_key(args.key)
    img = _load_image(args.input, args)
    write_image(args.out, _encrypt(img, key), args.format)
    print(f"encrypted {args.input} ({img.shape[1]}x{img.shape[0]}) -> {args.out}")
    return EXIT_OK


def cmd_decrypt(args) -> int:
    key = _load_key(args.key)
    img = _load_image(args.input, args)
    write_image(args.out, _decrypt(img, key), args.format)
    print(f"decrypted {args.input} -> {args.out}")
    print(
        "warning: ciphertexts carry no authentication tag; a wrong key produces "
        "noise rather than an error, so the result cannot be verified",
        file=sys.stderr,
    )
    return EXIT_OK


def _print_table(rows) -> None:
    w0 = max(len(r[0]) for r in rows)
    w1 = max(len(r[1]) for r in rows)
    for name, value, verdict in rows:
        print(f"{name:<{w0}}  {value:>{w1}}  {verdict}")


def cmd_analyze(args) -> int:
    key = _load_key(args.key)
    plain = _load_image(args.input, args)
    cipher = _load_image(args.cipher, args)
    report = analysis.analyze(plain, cipher, key)
    if args.report:
        Path(args.report).write_text(report.to_json(), encoding="utf-8")
    _print_table(report.summary_rows())
    if not report.cipher_matches_key:
        print("note: cipher image is not the encryption of the plain image under this key", file=sys.stderr)
    return EXIT_OK


def cmd_attack_sim(args) -> int:
    key = _load_key(args.key)
    kp = analysis.kp_attack_test(key, args.size)
    if args.input:
        m1 = _load_image(args.input, args)
    else:
        m1 = np.random.default_rng(1).integers(0, 256, (args.size, args.size), dtype=np.uint8)
    if args.input2:
        m2 = _load_image(args.input2, args)
    else:
        m2 = np.random.default_rng(2).integers(0, 256, m1.shape, dtype=np.uint8)
    cp = analysis.cp_attack_test(m1, m2, key)
    ks = analysis.key_sensitivity_test(m1, key, args.perturbation)
    rows = [
        ("known-plaintext black entropy / chi2", f"{kp.black_entropy:.4f} / {kp.black_chi_square:.2f}", ""),
        ("known-plaintext white entropy / chi2", f"{kp.white_entropy:.4f} / {kp.white_chi_square:.2f}", ""),
        ("known-plaintext", "", "PASS" if kp.passed else "FAIL"),
        ("chosen-plaintext violation %", f"{cp.violation_rate:.2f}",
         "DEGENERATE" if cp.degenerate else ("PASS" if cp.passed else "FAIL")),
        ("key sensitivity NPCR", f"{ks:.2f}", "PASS" if ks > 99.0 else "FAIL"),
    ]
    _print_table(rows)
    if args.report:
        out = {
            "known_plaintext": {"pass": kp.passed, "black_entropy": kp.black_entropy,
                                "white_entropy": kp.white_entropy,
                                "black_chi_square": kp.black_chi_square,
                                "white_chi_square": kp.white_chi_square},
            "chosen_plaintext": {"pass": cp.passed, "violation_rate": cp.violation_rate,
                                 "degenerate": cp.degenerate},
            "key_sensitivity": {"perturbation": args.perturbation, "npcr": ks},
        }
        Path(args.report).write_text(json.dumps(out, indent=2), encoding="utf-8")
    return EXIT_OK


def cmd_chaos_plot(args) -> int:
    if args.map == "qlogistic" and args.range is None:
        try:
            rows = plotdata.qlogistic_phase(QuantumLogisticParams(*args.qseed), args.n)
        except ValueError as exc:
            raise CliError(f"invalid phase-portrait settings: {exc}", EXIT_USAGE) from None
        text = plotdata.to_csv(rows, ["x", "y", "z"])
    else:
        if args.range is None:
            raise plotdata.InvalidRangeError(f"--range is required for the {args.map} map")
        lo, hi, steps = _parse_range(args.range)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            rows = plotdata.bifurcation(args.map, lo, hi, steps, keep=args.keep, beta=args.beta)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        name = {"henon": "alpha", "hybrid": "r", "qlogistic": "eta"}[args.map]
        text = plotdata.to_csv(rows, [name, "x"])
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {len(rows)} rows to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qmedshield", description="Chaos/DNA grayscale image encryption.")
    sub = p.add_subparsers(dest="command", required=True)

    def image_opts(sp):
        sp.add_argument("--format", choices=("pgm", "png"), default=None,
                        help="output image format (default: from --out suffix, else pgm)")
        sp.add_argument("--convert", action="store_true",
                        help="convert non-8-bit-gray PNG input to 8-bit gray")
        sp.add_argument("--max-size", type=int, default=DEFAULT_MAX_SIZE,
                        help="largest accepted width/height (default %(default)s)")

    sp = sub.add_parser("keygen", help="generate a key file")
    sp.add_argument("--out", required=True)
    sp.add_argument("--seed", help="64 hex digits; makes the key reproducible")
    sp.set_defaults(func=cmd_keygen)

    for name, func in (("encrypt", cmd_encrypt), ("decrypt", cmd_decrypt)):
        sp = sub.add_parser(name, help=f"{name} a grayscale image")
        sp.add_argument("--in", dest="input", required=True)
        sp.add_argument("--key", required=True)
        sp.add_argument("--out", required=True)
        image_opts(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("analyze", help="security metrics for a plain/cipher pair")
    sp.add_argument("--in", dest="input", required=True, help="plain image")
    sp.add_argument("--cipher", required=True, help="cipher image")
    sp.add_argument("--key", required=True)
    sp.add_argument("--report", help="write the JSON report here")
    image_opts(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("attack-sim", help="known/chosen-plaintext and key-sensitivity simulations")
    sp.add_argument("--key", required=True)
    sp.add_argument("--in", dest="input", help="first chosen plaintext (default: random)")
    sp.add_argument("--in2", dest="input2", help="second chosen plaintext (default: random)")
    sp.add_argument("--size", type=int, default=256, help="side of the black/white test images")
    sp.add_argument("--perturbation", type=float, default=-0.045,
                    help="shift applied to the quantum logistic y0 (default %(default)s)")
    sp.add_argument("--report", help="write a JSON summary here")
    image_opts(sp)
    sp.set_defaults(func=cmd_attack_sim)

    sp = sub.add_parser("chaos-plot", help="CSV data for bifurcation diagrams and phase portraits")
    sp.add_argument("--map", choices=plotdata.MAPS, required=True)
    sp.add_argument("--range", help="LO:HI[:STEPS] sweep of the control parameter")
    sp.add_argument("--out", help="CSV path (default: stdout)")
    sp.add_argument("--keep", type=int, default=100, help="iterates kept per parameter value")
    sp.add_argument("--beta", type=float, default=0.3, help="Henon beta during alpha sweeps")
    sp.add_argument("--n", type=int, default=5000, help="points in a phase portrait")
    sp.add_argument("--qseed", type=float, nargs=3, default=(0.5, 0.05, 0.02),
                    metavar=("X0", "Y0", "Z0"), help="quantum logistic seeds for the phase portrait")
    sp.set_defaults(func=cmd_chaos_plot)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except InvalidKeyError as exc:
        print(f"key error: {exc}", file=sys.stderr)
        return EXIT_KEY
    except ChaosError as exc:
        print(f"key error: chaotic map failed for this key: {exc}", file=sys.stderr)
        return EXIT_KEY
    except UnsupportedFormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except plotdata.InvalidRangeError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
