"""End-to-end embedding, extraction, stego-image construction and evaluation.

Container layout (all little-endian)::

    header   4s magic "CSIS", u16 version (1), u32 width, u32 height,
             u16 channels, u16 B, u16 p1, u16 m_size
    body     for each channel, for each block in raster order:
             p1 float32 (y_u) followed by m_size-p1 int32 (y_v or z_v)

The dibit stream runs through ``y_v`` in the same order as the body.
"""

from __future__ import annotations

import logging
import struct
import time
from dataclasses import dataclass, field, fields

import numpy as np

from . import descipher, metrics, stegocodec
from .descipher import DesKey
from .errors import CapacityError, ConfigurationError, FormatError, FramingError, NumericError
from .lasso import AdmmLassoSolver, AdmmSettings
from .pixelio import Image, merge_blocks, merge_channels, split_blocks, split_channels
from .sensing import BlockMeasurements, StegoKey, derive_matrices, invert_u, measure
from .transform import SparseBlockVector, densify, sparsify

log = logging.getLogger(__name__)

MAGIC = b"CSIS"
VERSION = 1
_HEADER = struct.Struct("<4sHIIHHHH")
_I32 = np.iinfo(np.int32)


@dataclass(frozen=True, eq=False)
class StegoContainer:
    width: int
    height: int
    channels: int
    block_size: int
    p1: int
    m_size: int
    y_u: np.ndarray  # (channels, blocks, p1) float32
    y_v: np.ndarray  # (channels, blocks, m_size - p1) int64

    @property
    def n_blocks(self) -> int:
        return (self.width * self.height) // self.block_size**2

    @property
    def measurements(self) -> BlockMeasurements:
        return BlockMeasurements(self.y_u.astype(np.float64), self.y_v)

    def _record_dtype(self) -> np.dtype:
        return np.dtype([("u", "<f4", (self.p1,)), ("v", "<i4", (self.m_size - self.p1,))])

    def to_bytes(self) -> bytes:
        if self.y_v.size and (self.y_v.min() < _I32.min or self.y_v.max() > _I32.max):
            raise FormatError("measurement exceeds the int32 container range")
        rec = np.empty((self.channels, self.n_blocks), dtype=self._record_dtype())
        rec["u"] = self.y_u
        rec["v"] = self.y_v
        header = _HEADER.pack(
            MAGIC, VERSION, self.width, self.height, self.channels,
            self.block_size, self.p1, self.m_size,
        )
        return header + rec.tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> StegoContainer:
        if len(data) < _HEADER.size:
            raise FormatError("truncated container header", offset=len(data))
        magic, version, w, h, c, b, p1, m = _HEADER.unpack_from(data)
        if magic != MAGIC:
            raise FormatError(f"bad container magic {magic!r}", offset=0)
        if version != VERSION:
            raise FormatError(f"unsupported container version {version}", offset=4)
        if c not in (1, 3):
            raise FormatError(f"bad channel count {c}", offset=14)
        try:
            StegoKey(0, b, p1, m)
        except ConfigurationError as exc:
            raise FormatError(f"invalid header parameters: {exc}", offset=16) from None
        if w % b or h % b:
            raise FormatError(f"block size {b} does not divide {w}x{h}", offset=16)
        shell = cls(w, h, c, b, p1, m, np.empty(0), np.empty(0))
        dtype = shell._record_dtype()
        expected = c * shell.n_blocks * dtype.itemsize
        body = data[_HEADER.size :]
        if len(body) != expected:
            raise FormatError(
                f"container body should be {expected} bytes, found {len(body)}",
                offset=_HEADER.size + min(len(body), expected),
            )
        rec = np.frombuffer(body, dtype=dtype).reshape(c, shell.n_blocks)
        return cls(
            w, h, c, b, p1, m,
            rec["u"].astype(np.float32),
            rec["v"].astype(np.int64),
        )

    def __eq__(self, other):
        if not isinstance(other, StegoContainer):
            return NotImplemented
        return self.to_bytes() == other.to_bytes()


def _sparse_image(img: Image, block_size: int, p1: int) -> SparseBlockVector:
    """Zigzag DCT vectors of every block, shape ``(channels, blocks, B*B)``."""
    blocks = np.stack([split_blocks(p, block_size) for p in split_channels(img)])
    return sparsify(blocks, p1)


def measure_image(img: Image, skey: StegoKey, mm=None) -> BlockMeasurements:
    mm = mm or derive_matrices(skey)
    return measure(_sparse_image(img, skey.block_size, skey.p1), mm)


def _container(img: Image, skey: StegoKey, meas: BlockMeasurements) -> StegoContainer:
    return StegoContainer(
        img.width, img.height, img.channels, skey.block_size, skey.p1, skey.m_size,
        np.asarray(meas.y_u, dtype=np.float32),
        np.asarray(meas.y_v, dtype=np.int64),
    )


def cover_container(cover: Image, skey: StegoKey) -> StegoContainer:
    """Container of the unmodified measurements (nothing embedded)."""
    return _container(cover, skey, measure_image(cover, skey))


def max_payload_bits(capacity_bits: int) -> int:
    """Largest plaintext length whose encrypted frame fits in ``capacity_bits``."""
    return max(64 * (capacity_bits // 64) - 64, -1)


def embed_file(cover: Image, payload, skey: StegoKey, dkey: DesKey) -> StegoContainer:
    meas = measure_image(cover, skey)
    cipher = descipher.encrypt_payload(payload, dkey)
    cap = stegocodec.capacity(meas)
    if cipher.size > cap:
        raise CapacityError(available=cap, required=cipher.size)
    return _container(cover, skey, stegocodec.embed_stream(cipher, meas))


def extract_file(container: StegoContainer, dkey: DesKey) -> np.ndarray:
    bits = stegocodec.extract_stream(container.measurements)
    return descipher.decrypt_payload(bits, dkey)


def _check_key(container: StegoContainer, skey: StegoKey) -> None:
    got = (container.block_size, container.p1, container.m_size)
    want = (skey.block_size, skey.p1, skey.m_size)
    if got != want:
        raise ConfigurationError(f"container parameters {got} do not match key {want}")


def construct_stego_image(
    container: StegoContainer,
    skey: StegoKey,
    settings: AdmmSettings | None = None,
    lam: float = 1.0,
) -> Image:
    """Recover each block (exact inverse on ``y_u``, ADMM-LASSO on ``z_v``)."""
    _check_key(container, skey)
    mm = derive_matrices(skey)
    solver = AdmmLassoSolver(mm.phi_v, lam, settings)
    c, nb = container.channels, container.n_blocks
    s_u = invert_u(container.y_u.astype(np.float64), mm.alpha)
    try:
        res = solver.solve(container.y_v.reshape(c * nb, -1).astype(np.float64))
    except NumericError as exc:
        ch, blk = divmod(exc.block, nb)
        raise NumericError(
            f"channel {ch}: LASSO solve failed", iteration=exc.iteration, block=blk
        ) from exc
    log.debug(
        "ADMM: %d/%d blocks converged, mean %.1f iterations",
        int(res.converged.sum()), res.converged.size, float(res.iterations.mean()),
    )
    s_v = res.solutions.reshape(c, nb, -1)
    blocks = densify(SparseBlockVector.from_parts(s_u, s_v))
    planes = [merge_blocks(blocks[i], container.width, container.height) for i in range(c)]
    return merge_channels(planes)


@dataclass
class ImageExtraction:
    payload: np.ndarray | None
    error: str | None = None
    ber: float | None = None

    @property
    def recovered(self) -> bool:
        return self.payload is not None


def extract_from_image(
    stego: Image, skey: StegoKey, dkey: DesKey, reference=None
) -> ImageExtraction:
    """Re-measure an image and try to decode a payload from it.

    Framing failures are reported in ``error`` instead of being raised.  With
    a ``reference`` payload the BER is filled in when the decoded length
    matches it.
    """
    bits = stegocodec.extract_stream(measure_image(stego, skey))
    try:
        payload = descipher.decrypt_payload(bits, dkey)
    except FramingError as exc:
        return ImageExtraction(None, str(exc))
    out = ImageExtraction(payload)
    if reference is not None:
        ref = np.asarray(reference, dtype=np.uint8).ravel()
        if ref.size == payload.size:
            out.ber = stegocodec.ber(ref, payload)
        else:
            out.error = f"decoded {payload.size} bits, reference has {ref.size}"
    return out


def random_payload(n_bits: int, seed: int) -> np.ndarray:
    return np.random.default_rng(seed).integers(0, 2, n_bits, dtype=np.uint8)


@dataclass
class EvaluationRun:
    p1: int
    m_size: int
    alpha: float
    lam: float
    rho: float
    key_seed: int
    payload_seed: int
    payload_bits: int
    capacity_bits: int
    ber: float
    p_add: float
    p_sub: float
    modified: int
    report: metrics.QualityReport
    runtimes: dict = field(default_factory=dict)
    stego: Image | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self) if f.name != "stego"}
        d["report"] = self.report.to_dict()
        d["runtimes"] = dict(self.runtimes)
        return d

    def to_text(self) -> str:
        lines = [
            f"{k}={v:.6f}" if isinstance(v, float) else f"{k}={v}"
            for k, v in self.to_dict().items()
            if k not in ("report", "runtimes")
        ]
        lines.append(self.report.to_text())
        lines += [f"runtime_{k}={v:.3f}" for k, v in self.runtimes.items()]
        return "\n".join(lines)


def evaluate(
    cover: Image,
    skey: StegoKey,
    dkey: DesKey,
    payload_seed: int = 0,
    fill: float = 0.9,
    lam: float = 1.0,
    settings: AdmmSettings | None = None,
) -> EvaluationRun:
    """Embed a random payload of ``fill`` x capacity, extract, construct, score."""
    settings = settings or AdmmSettings()
    times = {}
    t0 = time.perf_counter()
    raw = measure_image(cover, skey)
    cap = stegocodec.capacity(raw)
    n_bits = min(int(fill * cap), max_payload_bits(cap))
    if n_bits < 0:
        raise CapacityError(available=cap, required=64)
    payload = random_payload(n_bits, payload_seed)
    container = embed_file(cover, payload, skey, dkey)
    times["embed"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    extracted = extract_file(container, dkey)
    times["extract"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    stego = construct_stego_image(container, skey, settings, lam)
    times["construct"] = time.perf_counter() - t0

    profile = stegocodec.add_sub_profile(raw, container.measurements)
    return EvaluationRun(
        p1=skey.p1,
        m_size=skey.m_size,
        alpha=skey.alpha,
        lam=lam,
        rho=settings.rho,
        key_seed=skey.seed,
        payload_seed=payload_seed,
        payload_bits=n_bits,
        capacity_bits=cap,
        ber=stegocodec.ber(payload, extracted),
        p_add=profile.p_add,
        p_sub=profile.p_sub,
        modified=profile.modified,
        report=metrics.quality_report(cover, stego, cap, skey.m_size, skey.block_size),
        runtimes=times,
        stego=stego,
    )
