import json
import subprocess
import sys

import jsonschema
import numpy as np
import pytest

from qmedshield import cli
from qmedshield.analysis import REPORT_SCHEMA
from qmedshield.cipher import parse_key
from qmedshield.imageio import read_image, write_image
from qmedshield.samples import gradient_texture

SEED = "00" * 31 + "2a"


@pytest.fixture
def files(tmp_path):
    key = tmp_path / "k.key"
    assert cli.main(["keygen", "--out", str(key), "--seed", SEED]) == 0
    plain = tmp_path / "plain.pgm"
    write_image(plain, gradient_texture(64, 64))
    return tmp_path, key, plain


def test_keygen_seed_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.main(["keygen", "--out", str(a), "--seed", SEED]) == 0
    assert cli.main(["keygen", "--out", str(b), "--seed", SEED]) == 0
    assert a.read_text() == b.read_text()
    assert "fingerprint" in capsys.readouterr().out
    parse_key(a.read_text())


def test_keygen_random_differs(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    cli.main(["keygen", "--out", str(a)])
    cli.main(["keygen", "--out", str(b)])
    assert a.read_text() != b.read_text()


@pytest.mark.parametrize("seed", ["zz" * 32, "00" * 16])
def test_keygen_bad_seed(tmp_path, seed):
    assert cli.main(["keygen", "--out", str(tmp_path / "k"), "--seed", seed]) == cli.EXIT_USAGE


def test_keygen_unwritable(tmp_path):
    assert cli.main(["keygen", "--out", str(tmp_path / "no" / "such" / "k")]) == cli.EXIT_IO


def test_encrypt_decrypt_files(files, capsys):
    d, key, plain = files
    enc, dec = d / "c.pgm", d / "d.pgm"
    assert cli.main(["encrypt", "--in", str(plain), "--key", str(key), "--out", str(enc)]) == 0
    assert cli.main(["decrypt", "--in", str(enc), "--key", str(key), "--out", str(dec)]) == 0
    assert dec.read_bytes() == plain.read_bytes()
    assert "authentication" in capsys.readouterr().err


def test_encrypt_png(files):
    pytest.importorskip("PIL")
    d, key, plain = files
    enc, dec = d / "c.png", d / "d.pgm"
    assert cli.main(["encrypt", "--in", str(plain), "--key", str(key), "--out", str(enc)]) == 0
    assert cli.main(["decrypt", "--in", str(enc), "--key", str(key), "--out", str(dec)]) == 0
    np.testing.assert_array_equal(read_image(dec), read_image(plain))


def test_wrong_key_still_writes_with_warning(files, tmp_path, capsys):
    d, key, plain = files
    other = tmp_path / "other.key"
    cli.main(["keygen", "--out", str(other), "--seed", "11" * 32])
    enc, dec = d / "c.pgm", d / "d.pgm"
    cli.main(["encrypt", "--in", str(plain), "--key", str(key), "--out", str(enc)])
    assert cli.main(["decrypt", "--in", str(enc), "--key", str(other), "--out", str(dec)]) == 0
    assert dec.exists() and dec.read_bytes() != plain.read_bytes()
    assert "warning" in capsys.readouterr().err


def test_error_exit_codes(files):
    d, key, plain = files
    out = str(d / "o.pgm")
    assert cli.main(["encrypt", "--in", str(d / "missing.pgm"), "--key", str(key), "--out", out]) == cli.EXIT_IO
    bad_key = d / "bad.key"
    bad_key.write_text(key.read_text().replace("k7 =", "kk7 ="))
    assert cli.main(["encrypt", "--in", str(plain), "--key", str(bad_key), "--out", out]) == cli.EXIT_KEY
    deep = d / "deep.pgm"
    deep.write_bytes(b"P5\n2 2\n65535\n" + bytes(8))
    assert cli.main(["encrypt", "--in", str(deep), "--key", str(key), "--out", out]) == cli.EXIT_FORMAT
    assert cli.main(["encrypt", "--in", str(plain), "--key", str(key), "--out", out, "--max-size", "32"]) == cli.EXIT_FORMAT


def test_binary_key_file(files):
    d, _, plain = files
    k = d / "bin.key"
    k.write_bytes(b"\xff\xfe\x00")
    assert cli.main(["encrypt", "--in", str(plain), "--key", str(k), "--out", str(d / "o.pgm")]) == cli.EXIT_KEY


def test_usage_errors():
    with pytest.raises(SystemExit) as info:
        cli.main(["encrypt", "--in", "x"])
    assert info.value.code == cli.EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        cli.main([])
    assert info.value.code == cli.EXIT_USAGE


def test_analyze_report(files, capsys):
    d, key, plain = files
    enc, rep = d / "c.pgm", d / "r.json"
    cli.main(["encrypt", "--in", str(plain), "--key", str(key), "--out", str(enc)])
    capsys.readouterr()
    assert cli.main(["analyze", "--in", str(plain), "--cipher", str(enc), "--key", str(key), "--report", str(rep)]) == 0
    out = capsys.readouterr().out
    assert "entropy" in out.lower() and "PASS" in out
    data = json.loads(rep.read_text())
    jsonschema.validate(data, REPORT_SCHEMA)
    assert data["cipher_matches_key"] is True
    assert data["chi_square"]["cipher"]["pass"] == (data["chi_square"]["cipher"]["statistic"] < 293)


def test_attack_sim(files, capsys):
    d, key, _ = files
    rep = d / "a.json"
    assert cli.main(["attack-sim", "--key", str(key), "--size", "64", "--report", str(rep)]) == 0
    data = json.loads(rep.read_text())
    assert data["known_plaintext"]["pass"] is True
    assert data["key_sensitivity"]["npcr"] > 99.0
    assert "chosen-plaintext" in capsys.readouterr().out


def test_chaos_plot_henon(tmp_path):
    out = tmp_path / "h.csv"
    assert cli.main(["chaos-plot", "--map", "henon", "--range", "1.0:1.4:21", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "alpha,x"
    assert len(lines) == 1 + 21 * 100


def test_chaos_plot_qlogistic_phase_stdout(capsys):
    assert cli.main(["chaos-plot", "--map", "qlogistic", "--n", "100"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "x,y,z" and len(lines) == 101


@pytest.mark.parametrize(
    "argv",
    [
        ["chaos-plot", "--map", "henon", "--range", "1.4:1.0"],
        ["chaos-plot", "--map", "henon", "--range", "abc"],
        ["chaos-plot", "--map", "hybrid"],
        ["chaos-plot", "--map", "qlogistic", "--qseed", "0.5", "0.9", "0.02"],
    ],
)
def test_chaos_plot_invalid(argv):
    assert cli.main(argv) == cli.EXIT_USAGE


def test_console_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "qmedshield", "keygen", "--out", str(tmp_path / "k"), "--seed", SEED],
                       capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
