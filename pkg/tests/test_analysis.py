import json
import math

import jsonschema
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

import oracles
from qmedshield import analysis
from qmedshield.analysis import REPORT_SCHEMA, ZeroVarianceError, analyze
from qmedshield.cipher import encrypt

small_images = hnp.arrays(np.uint8, hnp.array_shapes(min_dims=2, max_dims=2, min_side=2, max_side=10))


@pytest.fixture(scope="module")
def pairs():
    rng = np.random.default_rng(2024)
    return [(rng.integers(0, 256, (8, 8), dtype=np.uint8), rng.integers(0, 256, (8, 8), dtype=np.uint8)) for _ in range(50)]


@pytest.mark.filterwarnings("ignore:chi-square on")
def test_metrics_agree_with_oracles(pairs):
    for a, b in pairs:
        assert analysis.npcr(a, b) == pytest.approx(oracles.npcr(a, b), abs=1e-9)
        assert analysis.uaci(a, b) == pytest.approx(oracles.uaci(a, b), abs=1e-9)
        assert analysis.entropy(a) == pytest.approx(oracles.entropy(a), abs=1e-9)
        assert analysis.chi_square(a).statistic == pytest.approx(oracles.chi_square(a), abs=1e-9)
        for d in analysis.DIRECTIONS:
            assert analysis.correlation(a, d) == pytest.approx(oracles.correlation(a, d), abs=1e-9)


# ---------------------------------------------------------------- NPCR / UACI


def test_npcr_uaci_extremes():
    z = np.zeros((4, 4), np.uint8)
    f = np.full((4, 4), 255, np.uint8)
    assert analysis.npcr(z, z) == 0.0 and analysis.uaci(z, z) == 0.0
    assert analysis.npcr(z, f) == 100.0 and analysis.uaci(z, f) == 100.0


def test_uaci_uses_absolute_difference():
    a = np.array([[10, 200]], np.uint8)
    b = np.array([[200, 10]], np.uint8)
    assert analysis.uaci(a, b) == pytest.approx(100 * 190 / 255)


@given(small_images, st.data())
def test_npcr_uaci_symmetric_and_bounded(a, data):
    b = data.draw(hnp.arrays(np.uint8, a.shape))
    for f in (analysis.npcr, analysis.uaci):
        assert f(a, b) == f(b, a)
        assert 0.0 <= f(a, b) <= 100.0


def test_shape_mismatch():
    with pytest.raises(ValueError):
        analysis.npcr(np.zeros((2, 2), np.uint8), np.zeros((2, 3), np.uint8))


# ---------------------------------------------------------------- entropy / chi-square


def test_entropy_examples():
    assert analysis.entropy(np.zeros((16, 16), np.uint8)) == 0.0
    assert analysis.entropy(np.arange(256, dtype=np.uint8).reshape(16, 16)) == pytest.approx(8.0)
    assert analysis.entropy(np.array([[0, 255]], np.uint8)) == pytest.approx(1.0)


@given(small_images, st.randoms(use_true_random=False))
def test_entropy_permutation_invariant(img, r):
    flat = img.ravel().tolist()
    r.shuffle(flat)
    shuffled = np.array(flat, np.uint8).reshape(img.shape)
    assert analysis.entropy(shuffled) == pytest.approx(analysis.entropy(img), abs=1e-12)
    assert 0.0 <= analysis.entropy(img) <= 8.0


def test_chi_square_constant_image():
    stat, passed = analysis.chi_square(np.zeros((256, 256), np.uint8))
    assert stat == pytest.approx(16_711_680.0)
    assert not passed


def test_chi_square_flat_histogram():
    img = np.tile(np.arange(256, dtype=np.uint8), (256, 1))
    assert analysis.chi_square(img) == (0.0, True)


def test_chi_square_warns_on_tiny_image():
    with pytest.warns(RuntimeWarning):
        analysis.chi_square(np.zeros((4, 4), np.uint8))


def test_histogram_sums_to_pixel_count(rng):
    img = rng.integers(0, 256, (13, 17), dtype=np.uint8)
    h = analysis.histogram(img)
    assert h.shape == (256,) and h.sum() == 13 * 17


# ---------------------------------------------------------------- correlation


def test_correlation_of_linear_ramp():
    img = np.tile(np.arange(16, dtype=np.uint8) * 10, (16, 1))
    for d in analysis.DIRECTIONS:
        assert analysis.correlation(img, d) == pytest.approx(1.0)


def test_correlation_constant_image():
    img = np.full((8, 8), 7, np.uint8)
    with pytest.raises(ZeroVarianceError):
        analysis.correlation(img, "vertical")
    assert analysis.correlations(img) == dict.fromkeys(analysis.DIRECTIONS)


def test_correlation_checkerboard_is_negative():
    img = (np.indices((8, 8)).sum(axis=0) % 2 * 255).astype(np.uint8)
    assert analysis.correlation(img, "horizontal") == pytest.approx(-1.0)
    assert analysis.correlation(img, "diagonal") == pytest.approx(1.0)


@settings(max_examples=50)
@given(hnp.arrays(np.uint8, st.tuples(st.integers(3, 10), st.integers(3, 10))), st.integers(1, 3), st.integers(0, 30))
def test_correlation_affine_invariant(img, scale, offset):
    scaled = img.astype(np.int64) * scale + offset
    if scaled.max() > 255:
        return
    for d in analysis.DIRECTIONS:
        try:
            want = analysis.correlation(img, d)
        except ZeroVarianceError:
            continue
        assert analysis.correlation(scaled.astype(np.uint8), d) == pytest.approx(want, abs=1e-9)
        assert -1.0 <= want <= 1.0


def test_literal_normalisation_differs(rng):
    img = rng.integers(0, 256, (32, 32), dtype=np.uint8)
    x, y = analysis.adjacent_pairs(img, "horizontal")
    cov = np.mean((x - x.mean()) * (y - y.mean()))
    assert analysis.correlation(img, literal=True) == pytest.approx(cov / (x.var() * y.var()))


def test_too_few_pairs():
    with pytest.raises(ValueError):
        analysis.correlation(np.zeros((2, 2), np.uint8), "horizontal")


def test_bad_direction():
    with pytest.raises(ValueError):
        analysis.correlation(np.zeros((4, 4), np.uint8), "sideways")


# ---------------------------------------------------------------- error metrics


def test_error_metrics_identical():
    img = np.arange(64, dtype=np.uint8).reshape(8, 8)
    mae, rmse, psnr = analysis.error_metrics(img, img)
    assert mae == 0.0 and rmse == 0.0 and math.isinf(psnr)


def test_error_metrics_extremes():
    mae, rmse, psnr = analysis.error_metrics(np.zeros((4, 4), np.uint8), np.full((4, 4), 255, np.uint8))
    assert mae == 255.0 and rmse == 255.0 and psnr == pytest.approx(0.0)


@given(small_images, st.data())
def test_mae_never_exceeds_rmse(a, data):
    b = data.draw(hnp.arrays(np.uint8, a.shape))
    m = analysis.error_metrics(a, b)
    assert m.mae <= m.rmse + 1e-9


# ---------------------------------------------------------------- attacks


def test_kp_passes_for_cipher(key):
    r = analysis.kp_attack_test(key, size=128)
    assert r.passed and r.black_entropy > 7.9 and r.white_entropy > 7.9


def test_kp_fails_for_identity_cipher(key):
    r = analysis.kp_attack_test(key, size=64, encrypt_fn=lambda m, k: m.copy())
    assert not r.passed and r.black_entropy == 0.0


def test_cp_detects_xor_mask_cipher(key, rng):
    mask = rng.integers(0, 256, (32, 32), dtype=np.uint8)
    m1 = rng.integers(0, 256, (32, 32), dtype=np.uint8)
    m2 = rng.integers(0, 256, (32, 32), dtype=np.uint8)
    r = analysis.cp_attack_test(m1, m2, key, encrypt_fn=lambda m, k: m ^ mask)
    assert not r.passed and r.violation_rate == 0.0 and not r.degenerate


def test_cp_degenerate_for_equal_plaintexts(key):
    m = np.zeros((8, 8), np.uint8)
    r = analysis.cp_attack_test(m, m, key)
    assert r.degenerate and r.passed


def test_key_sensitivity(reference_key, gradient256):
    assert analysis.key_sensitivity_test(gradient256, reference_key, -0.045) > 99.0
    assert analysis.key_sensitivity_test(gradient256, reference_key, 0.0) == 0.0


def test_one_pixel_variant():
    img = np.full((5, 5), 255, np.uint8)
    v, pos = analysis.one_pixel_variant(img)
    assert pos == (2, 2) and v[2, 2] == 0 and analysis.npcr(img, v) == 4.0
    assert img[2, 2] == 255


# ---------------------------------------------------------------- report


@pytest.fixture(scope="module")
def report(key):
    from qmedshield.samples import gradient_texture

    plain = gradient_texture(64, 64)
    return analyze(plain, encrypt(plain, key), key, kp_size=64)


def test_report_validates_against_schema(report):
    d = json.loads(report.to_json())
    jsonschema.validate(d, REPORT_SCHEMA)
    assert d["schema"] == analysis.REPORT_SCHEMA_ID
    assert d["cipher_matches_key"] is True
    assert d["width"] == d["height"] == 64


def test_report_values_consistent(report):
    d = report.to_dict()
    assert sum(d["histogram"]["cipher"]) == 64 * 64
    assert d["key_space_bits"] == 572
    assert d["differential"]["pixel"] == [32, 32]


def test_report_detects_foreign_cipher(key):
    plain = np.arange(64 * 64, dtype=np.uint8).reshape(64, 64)
    rep = analyze(plain, np.zeros_like(plain), key, kp_size=32)
    assert rep.to_dict()["cipher_matches_key"] is False


def test_report_identical_images_give_infinite_psnr_string(key):
    plain = np.arange(32 * 32, dtype=np.uint8).reshape(32, 32)
    d = json.loads(analyze(plain, plain, key, kp_size=32).to_json())
    assert d["error_metrics"]["psnr"] == "Infinity"
    jsonschema.validate(d, REPORT_SCHEMA)


def test_summary_rows(report):
    rows = report.summary_rows()
    assert rows and all(len(r) == 3 for r in rows)
