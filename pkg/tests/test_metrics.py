import math

import numpy as np
import pytest

from csis.errors import ConfigurationError
from csis.metrics import (
    QualityReport,
    entropy,
    histogram,
    mse,
    mssim,
    ncc,
    psnr,
    quality_report,
    sampling_rate,
    ssim_map,
)
from csis.pixelio import Image


def test_mse():
    a = np.zeros((4, 5))
    assert mse(a, a) == 0
    assert mse(a, np.full((4, 5), 255)) == 65025
    assert mse([[0, 0]], [[3, 4]]) == 12.5
    with pytest.raises(ConfigurationError):
        mse(np.zeros((2, 2)), np.zeros((2, 3)))


def test_psnr():
    a = np.zeros((3, 3))
    assert psnr(a, a) == math.inf
    assert psnr(a, np.full((3, 3), 255)) == pytest.approx(0.0)
    # MSE = 6.5025 -> 40 dB
    b = np.zeros((1, 4))
    c = np.array([[0.0, 0.0, 0.0, math.sqrt(4 * 6.5025)]])
    assert mse(b, c) == pytest.approx(6.5025)
    assert psnr(b, c) == pytest.approx(40.0)


def test_psnr_mse_relation(rng):
    a = rng.integers(0, 256, (16, 16))
    b = np.clip(a + rng.integers(-5, 6, (16, 16)), 0, 255)
    assert psnr(a, b) == 10 * math.log10(255**2 / mse(a, b))


def direct_ssim(a, b):
    """Brute-force windowed SSIM: explicit Gaussian-weighted sums per window."""
    x = np.arange(11) - 5
    g = np.exp(-(x**2) / (2 * 1.5**2))
    w = np.outer(g, g)
    w /= w.sum()
    c1, c2 = (0.01 * 255) ** 2, (0.03 * 255) ** 2
    vals = []
    for i in range(a.shape[0] - 10):
        for j in range(a.shape[1] - 10):
            pa, pb = a[i : i + 11, j : j + 11], b[i : i + 11, j : j + 11]
            ma, mb = (w * pa).sum(), (w * pb).sum()
            va = (w * (pa - ma) ** 2).sum()
            vb = (w * (pb - mb) ** 2).sum()
            cov = (w * (pa - ma) * (pb - mb)).sum()
            vals.append(((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma**2 + mb**2 + c1) * (va + vb + c2)))
    return np.mean(vals)


def test_mssim_against_direct_windows(rng):
    a = rng.integers(0, 256, (20, 23)).astype(float)
    b = np.clip(a + rng.normal(0, 20, a.shape), 0, 255)
    assert mssim(a, b) == pytest.approx(direct_ssim(a, b), abs=1e-10)
    assert ssim_map(a, b).shape == (10, 13)


def test_mssim_properties(camera):
    cam = camera.plane
    assert mssim(cam, cam) == 1.0
    assert mssim(cam, 255 - cam) < 0.5
    noisy = np.clip(cam + np.random.default_rng(0).normal(0, 10, cam.shape), 0, 255)
    assert abs(mssim(cam, noisy) - mssim(noisy, cam)) <= 1e-12
    assert -1 <= mssim(cam, noisy) < 1
    with pytest.raises(ConfigurationError):
        mssim(np.zeros((10, 30)), np.zeros((10, 30)))


def test_ncc(rng):
    c = rng.integers(1, 128, (8, 8)).astype(float)
    assert ncc(c, c) == 1.0
    assert ncc(c, 2 * c) == pytest.approx(2.0)
    assert ncc(c, np.zeros_like(c)) == 0.0
    with pytest.raises(ConfigurationError):
        ncc(np.zeros((2, 2)), np.ones((2, 2)))


def test_entropy(rng):
    assert entropy(np.full((5, 5), 17)) == 0
    assert entropy(np.array([[0, 255], [255, 0]])) == pytest.approx(1.0)
    assert entropy(np.arange(256).reshape(16, 16)) == pytest.approx(8.0)
    x = rng.integers(0, 256, (32, 32))
    assert entropy(x) == pytest.approx(entropy(rng.permutation(x.ravel())))
    assert 0 <= entropy(x) <= 8


def test_sampling_rate():
    assert sampling_rate(37, 8) == 0.578125
    assert sampling_rate(64, 8) == 1.0
    assert sampling_rate(32, 8) == 0.5


def test_histogram(rng):
    assert histogram([], -3, 3).tolist() == [0] * 7
    v = rng.integers(-50, 50, 1000)
    h = histogram(v, -20, 20)
    assert h.sum() == 1000
    assert h[20] == np.count_nonzero(v == 0)
    assert histogram([1, 1, 2, 5], 0, 3).tolist() == [0, 2, 1, 1]


def test_quality_report_color_and_serialisation():
    rng = np.random.default_rng(3)
    cover = Image(rng.integers(0, 256, (16, 16, 3)).astype(np.uint8))
    rep = quality_report(cover, cover, 100, 37, 8)
    assert rep.psnr_db == math.inf
    assert rep.ncc_per_channel == [1.0, 1.0, 1.0]
    d = rep.to_dict()
    assert d["psnr_db"] == "inf" and d["capacity_bits"] == 100
    text = rep.to_text()
    assert "psnr_db=inf" in text and "sampling_rate=0.578125" in text
    assert isinstance(rep, QualityReport)
    assert '"psnr_db": "inf"' in rep.to_json()
