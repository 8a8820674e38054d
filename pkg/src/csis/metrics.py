"""Image quality and information metrics for cover/stego comparison."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import ConfigurationError
from .pixelio import Image

PEAK = 255.0
SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_C1 = (0.01 * PEAK) ** 2
SSIM_C2 = (0.03 * PEAK) ** 2


def _as_plane(x) -> np.ndarray:
    if isinstance(x, Image):
        x = x.pixels
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 3 and arr.shape[2] == 1:
        arr = arr[:, :, 0]
    return arr


def _pair(a, b):
    a, b = _as_plane(a), _as_plane(b)
    if a.shape != b.shape:
        raise ConfigurationError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a, b


def mse(a, b) -> float:
    a, b = _pair(a, b)
    return float(np.mean((a - b) ** 2))


def psnr_from_mse(value: float) -> float:
    if value == 0:
        return math.inf
    return 10.0 * math.log10(PEAK**2 / value)


def psnr(a, b) -> float:
    """PSNR in dB; identical inputs give ``math.inf``."""
    return psnr_from_mse(mse(a, b))


def _gaussian_window(size: int = SSIM_WINDOW, sigma: float = SSIM_SIGMA) -> np.ndarray:
    x = np.arange(size) - (size - 1) / 2
    g = np.exp(-(x**2) / (2 * sigma**2))
    return g / g.sum()


def _filter_valid(img: np.ndarray, g: np.ndarray) -> np.ndarray:
    rows = sliding_window_view(img, g.size, axis=1) @ g
    return sliding_window_view(rows, g.size, axis=0) @ g


def ssim_map(a, b) -> np.ndarray:
    a, b = _pair(a, b)
    if a.ndim != 2:
        raise ConfigurationError("ssim works on single-channel planes")
    if min(a.shape) < SSIM_WINDOW:
        raise ConfigurationError(
            f"images must be at least {SSIM_WINDOW}x{SSIM_WINDOW} for SSIM"
        )
    g = _gaussian_window()
    mu1, mu2 = _filter_valid(a, g), _filter_valid(b, g)
    mu1_sq, mu2_sq, mu12 = mu1 * mu1, mu2 * mu2, mu1 * mu2
    s1 = _filter_valid(a * a, g) - mu1_sq
    s2 = _filter_valid(b * b, g) - mu2_sq
    s12 = _filter_valid(a * b, g) - mu12
    num = (2 * mu12 + SSIM_C1) * (2 * s12 + SSIM_C2)
    den = (mu1_sq + mu2_sq + SSIM_C1) * (s1 + s2 + SSIM_C2)
    return num / den


def mssim(a, b) -> float:
    """Mean SSIM over 11x11 Gaussian (sigma 1.5) windows, K1=0.01, K2=0.03."""
    return float(np.mean(ssim_map(a, b)))


def ncc(cover, stego) -> float:
    """``sum(I * SI) / sum(I**2)`` -- normalised by the cover energy only."""
    cover, stego = _pair(cover, stego)
    energy = float(np.sum(cover * cover))
    if energy == 0:
        raise ConfigurationError("NCC is undefined for an all-zero cover")
    return float(np.sum(cover * stego)) / energy


def entropy(plane) -> float:
    values = np.asarray(_as_plane(plane)).astype(np.int64).ravel()
    if values.size == 0:
        return 0.0
    p = np.bincount(values, minlength=256) / values.size
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum()) + 0.0


def sampling_rate(m_size: int, block_size: int) -> float:
    return m_size / block_size**2


def histogram(values, lo: int, hi: int) -> np.ndarray:
    """Counts of each integer in ``[lo, hi]``; outliers land in the end bins."""
    if hi < lo:
        raise ConfigurationError("empty histogram range")
    v = np.clip(np.asarray(values, dtype=np.int64).ravel(), lo, hi)
    return np.bincount(v - lo, minlength=hi - lo + 1)


def _num(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


@dataclass
class QualityReport:
    mse: float
    psnr_db: float
    mssim: float
    ncc: float
    entropy_cover: float
    entropy_stego: float
    capacity_bits: int
    sampling_rate: float
    ncc_per_channel: list[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {k: (_num(v) if not isinstance(v, list) else v) for k, v in asdict(self).items()}

    def to_text(self) -> str:
        lines = []
        for k, v in self.to_dict().items():
            if isinstance(v, list):
                v = ",".join(f"{x:.6f}" for x in v)
            elif isinstance(v, float):
                v = f"{v:.6f}"
            lines.append(f"{k}={v}")
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def quality_report(
    cover: Image, stego: Image, capacity_bits: int, m_size: int, block_size: int
) -> QualityReport:
    """Per-channel metrics averaged over channels (NCC also kept per channel)."""
    if cover.pixels.shape != stego.pixels.shape:
        raise ConfigurationError("cover and stego dimensions differ")
    chans = range(cover.channels)
    c = [cover.pixels[:, :, i] for i in chans]
    s = [stego.pixels[:, :, i] for i in chans]
    nccs = [ncc(ci, si) for ci, si in zip(c, s)]
    mses = [mse(ci, si) for ci, si in zip(c, s)]
    return QualityReport(
        mse=float(np.mean(mses)),
        psnr_db=float(np.mean([psnr_from_mse(m) for m in mses])),
        mssim=float(np.mean([mssim(ci, si) for ci, si in zip(c, s)])),
        ncc=float(np.mean(nccs)),
        entropy_cover=float(np.mean([entropy(ci) for ci in c])),
        entropy_stego=float(np.mean([entropy(si) for si in s])),
        capacity_bits=int(capacity_bits),
        sampling_rate=sampling_rate(m_size, block_size),
        ncc_per_channel=nccs,
    )
