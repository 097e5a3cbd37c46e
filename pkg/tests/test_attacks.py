import numpy as np
import pytest

from hybridmark.attacks import (
    LUMA_QUANT_TABLE,
    AttackError,
    apply_attack,
    apply_chain,
    crop_attack,
    gaussian_blur,
    gaussian_kernel,
    gaussian_noise,
    histogram_equalize,
    jpeg_attack,
    jpeg_quant_table,
    parse_attack,
    rotate_attack,
    salt_pepper,
)
from hybridmark.metrics import mse, psnr

ALL_TOKENS = [
    "none",
    "gn:var=0.001,seed=7",
    "sp:density=0.01,seed=3",
    "lpf:sigma=0.5,win=3",
    "smooth:sigma=0.6,win=9",
    "he",
    "jpeg:qf=30",
    "crop:frac=0.25",
    "crop:frac=0.5,anchor=center",
    "rot:deg=2.5",
    "chain:[he|gn:var=0.001,seed=7]",
]


@pytest.fixture(scope="module")
def texture():
    rng = np.random.default_rng(0)
    return np.clip(np.round(128 + 40 * rng.standard_normal((64, 96))), 0, 255)


def test_tiny_noise_within_one(texture):
    out = gaussian_noise(texture, 1e-12, seed=1)
    assert np.abs(out - texture).max() <= 1


def test_noise_sample_variance():
    img = np.full((512, 512), 128.0)
    out = gaussian_noise(img, 0.001, seed=42)
    assert 0.0009 <= np.var((out - img) / 255.0) <= 0.0011


def test_noise_reproducible(texture):
    a = gaussian_noise(texture, 0.01, seed=5)
    b = gaussian_noise(texture, 0.01, seed=5)
    c = gaussian_noise(texture, 0.01, seed=6)
    assert a.tobytes() == b.tobytes()
    assert not np.array_equal(a, c)


def test_salt_pepper_fraction():
    img = np.full((512, 512), 128.0)
    for d in (0.001, 0.05, 0.3):
        frac = np.mean(salt_pepper(img, d, seed=9) != img)
        assert abs(frac - d) <= 0.2 * d


def test_salt_pepper_full():
    out = salt_pepper(np.full((64, 64), 128.0), 1.0, seed=1)
    assert set(np.unique(out)) <= {0.0, 255.0}
    assert 0.4 < np.mean(out == 0) < 0.6


@pytest.mark.parametrize("bad", [0.0, 1.5, -0.1])
def test_noise_parameter_ranges(texture, bad):
    with pytest.raises(AttackError):
        gaussian_noise(texture, bad, 0)
    with pytest.raises(AttackError):
        salt_pepper(texture, bad, 0)


def test_gaussian_kernel_values():
    k = gaussian_kernel(0.5, 3)
    e1, e2 = np.exp(-1 / (2 * 0.25)), np.exp(-2 / (2 * 0.25))
    total = 1 + 4 * e1 + 4 * e2
    assert k[1, 1] == pytest.approx(1 / total)
    assert k[0, 1] == pytest.approx(e1 / total)
    assert k[0, 0] == pytest.approx(e2 / total)
    assert k[1, 1] == pytest.approx(0.6193, abs=1e-4)
    assert k[0, 1] == pytest.approx(0.0838, abs=1e-4)
    assert k[0, 0] == pytest.approx(0.0113, abs=1e-4)


def test_blur_preserves_constant():
    img = np.full((32, 32), 77.0)
    np.testing.assert_array_equal(gaussian_blur(img, 0.6, 9), img)


def test_blur_validation(texture):
    with pytest.raises(AttackError):
        gaussian_blur(texture, 0.5, 4)
    with pytest.raises(AttackError):
        gaussian_blur(texture, 0.0, 3)


def test_histogram_two_levels():
    img = np.zeros((16, 16))
    img[:8] = 255
    np.testing.assert_array_equal(histogram_equalize(img), img)


def test_histogram_constant_maps_to_zero():
    np.testing.assert_array_equal(histogram_equalize(np.full((8, 8), 90.0)), 0)


def test_histogram_spreads_range():
    rng = np.random.default_rng(1)
    img = rng.integers(100, 140, (64, 64)).astype(float)
    out = histogram_equalize(img)
    assert out.min() == 0 and out.max() == 255
    # monotone remap
    order = np.argsort(img.ravel(), kind="stable")
    assert np.all(np.diff(out.ravel()[order]) >= 0)


def test_quant_table_scaling():
    np.testing.assert_array_equal(jpeg_quant_table(50), LUMA_QUANT_TABLE)
    assert jpeg_quant_table(90)[0, 0] == np.floor((16 * 20 + 50) / 100)
    assert jpeg_quant_table(10)[7, 7] == min(255, np.floor((99 * 500 + 50) / 100))
    assert jpeg_quant_table(99).min() == 1
    with pytest.raises(AttackError):
        jpeg_quant_table(100)


def test_jpeg_q99_nearly_lossless(camera):
    assert psnr(jpeg_attack(camera, 99), camera) >= 45


def test_jpeg_monotone_distortion(camera):
    errs = [mse(jpeg_attack(camera, q), camera) for q in (10, 50, 90)]
    assert errs[0] >= errs[1] >= errs[2]


def test_jpeg_flat_block_is_exact():
    img = np.full((16, 16), 128.0)
    np.testing.assert_array_equal(jpeg_attack(img, 10), img)


def test_crop_quarter():
    img = np.full((512, 512), 200.0)
    out = crop_attack(img, 0.25)
    assert np.all(out[:256, :256] == 0)
    assert np.all(out[256:, :] == 200) and np.all(out[:, 256:] == 200)


def test_crop_center_area():
    img = np.full((512, 512), 1.0)
    out = crop_attack(img, 0.5, "center")
    assert abs(np.mean(out == 0) - 0.5) < 0.01
    assert out[256, 256] == 0 and out[0, 0] == 1


def test_crop_validation(texture):
    with pytest.raises(AttackError):
        crop_attack(texture, 1.0)
    with pytest.raises(AttackError):
        crop_attack(texture, 0.3, "bottom")


def test_rotate_zero_is_identity(texture):
    np.testing.assert_array_equal(rotate_attack(texture, 0.0), texture)


def test_rotate_zero_fill_and_limits(texture):
    out = rotate_attack(np.full((64, 64), 200.0), 30)
    assert out[0, 0] == 0 and out[32, 32] == 200
    with pytest.raises(AttackError):
        rotate_attack(texture, 46)


def test_chain(texture):
    assert apply_chain(texture, []) is not None
    np.testing.assert_array_equal(apply_chain(texture, []), texture)
    spec = parse_attack("chain:[he|gn:var=0.001,seed=7]")
    manual = gaussian_noise(histogram_equalize(texture), 0.001, 7)
    np.testing.assert_array_equal(apply_attack(texture, spec), manual)


@pytest.mark.parametrize("token", ALL_TOKENS)
def test_attacks_preserve_shape_and_range(texture, token):
    spec = parse_attack(token)
    a = apply_attack(texture, spec)
    b = apply_attack(texture, spec)
    assert a.shape == texture.shape
    assert a.min() >= 0 and a.max() <= 255
    assert np.array_equal(a, np.round(a))
    assert a.tobytes() == b.tobytes()


@pytest.mark.parametrize("token", ALL_TOKENS + ["chain:[]", "chain:[jpeg:qf=90|chain:[he|rot:deg=1]]"])
def test_token_roundtrip(token):
    spec = parse_attack(token)
    assert parse_attack(spec.token) == spec
    assert spec.token == token


@pytest.mark.parametrize(
    "token, fragment",
    [
        ("blur:sigma=1", "position 0"),
        ("jpeg:quality=9", "position 5"),
        ("gn:var=abc", "position 3"),
        ("chain:[he|jpeg]", "needs parameter 'qf'"),
        ("chain:[he|rot:deg=x]", "position 14"),
        ("chain:he", "position 6"),
        ("jpeg:qf=0", "out of range"),
        ("lpf:sigma=0.5,win=4", "out of range"),
    ],
)
def test_token_errors(token, fragment):
    with pytest.raises(AttackError, match=fragment):
        parse_attack(token)
