"""Keyed measurement matrices and block measurements.

The key's seed drives a SplitMix64 generator; a Fisher-Yates shuffle of
``0..63`` driven by it (``j`` drawn uniformly from ``[0, i]`` by rejection
sampling, ``i`` running from 63 down to 1) permutes the rows of the order-64
Sylvester Hadamard matrix.  ``phi_v`` is made of permuted rows
``p1 .. m_size-1`` truncated to the first ``p2`` columns.  ``phi_u`` is
``alpha * I`` and is never materialised.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError, FormatError
from .pixelio import round_half_away
from .transform import SparseBlockVector

HADAMARD_ORDER = 64
KEY_MAGIC = b"CSISKEY1".ljust(16, b"\0")
_KEY_BODY = struct.Struct("<QHHHf")
KEY_FILE_SIZE = len(KEY_MAGIC) + _KEY_BODY.size

_MASK64 = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)``."""
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            r = self.next()
            if r < limit:
                return r % bound


def keyed_permutation(seed: int, n: int = HADAMARD_ORDER) -> np.ndarray:
    rng = SplitMix64(seed)
    perm = list(range(n))
    for i in range(n - 1, 0, -1):
        j = rng.below(i + 1)
        perm[i], perm[j] = perm[j], perm[i]
    return np.array(perm, dtype=np.intp)


@lru_cache(maxsize=None)
def sylvester_hadamard(order: int) -> np.ndarray:
    if order < 1 or order & (order - 1):
        raise ConfigurationError("Sylvester construction needs a power-of-two order")
    h = np.ones((1, 1), dtype=np.int8)
    while h.shape[0] < order:
        h = np.block([[h, h], [h, -h]])
    h.setflags(write=False)
    return h


@dataclass(frozen=True)
class StegoKey:
    seed: int
    block_size: int = 8
    p1: int = 12
    m_size: int = 37
    alpha: float = 1.0

    def __post_init__(self):
        n = self.block_size * self.block_size
        if not 0 <= self.seed <= _MASK64:
            raise ConfigurationError("seed must be an unsigned 64-bit integer")
        if self.block_size < 1:
            raise ConfigurationError("block size must be positive")
        if not 1 <= self.p1 < self.m_size < n:
            raise ConfigurationError(
                f"need 1 <= p1 < m_size < B^2, got p1={self.p1}, "
                f"m_size={self.m_size}, B^2={n}"
            )
        if n - self.p1 > HADAMARD_ORDER or self.m_size > HADAMARD_ORDER:
            raise ConfigurationError(
                f"p2={n - self.p1} / m_size={self.m_size} exceed the order-"
                f"{HADAMARD_ORDER} Hadamard matrix"
            )
        if not self.alpha > 0:
            raise ConfigurationError("alpha must be positive")

    @property
    def p2(self) -> int:
        return self.block_size**2 - self.p1

    @property
    def n_cs(self) -> int:
        """Number of compressed-sensing measurements per block."""
        return self.m_size - self.p1

    def with_seed(self, seed: int) -> StegoKey:
        return StegoKey(seed & _MASK64, self.block_size, self.p1, self.m_size, self.alpha)

    def to_bytes(self) -> bytes:
        return KEY_MAGIC + _KEY_BODY.pack(
            self.seed, self.block_size, self.p1, self.m_size, self.alpha
        )

    @classmethod
    def from_bytes(cls, data: bytes) -> StegoKey:
        if data[: len(KEY_MAGIC)] != KEY_MAGIC:
            raise FormatError("not a CSIS key file", offset=0)
        if len(data) != KEY_FILE_SIZE:
            raise FormatError(
                f"key file must be {KEY_FILE_SIZE} bytes, got {len(data)}",
                offset=min(len(data), KEY_FILE_SIZE),
            )
        seed, b, p1, m, alpha = _KEY_BODY.unpack_from(data, len(KEY_MAGIC))
        return cls(seed, b, p1, m, float(alpha))


@dataclass(frozen=True, eq=False)
class MeasurementMatrices:
    alpha: float
    phi_v: np.ndarray  # (m_size - p1, p2), entries +-1

    @property
    def n_cs(self) -> int:
        return self.phi_v.shape[0]

    @property
    def p2(self) -> int:
        return self.phi_v.shape[1]


def derive_matrices(key: StegoKey) -> MeasurementMatrices:
    perm = keyed_permutation(key.seed)
    rows = perm[key.p1 : key.m_size]
    phi_v = sylvester_hadamard(HADAMARD_ORDER)[rows, : key.p2].astype(np.float64)
    phi_v.setflags(write=False)
    return MeasurementMatrices(float(key.alpha), phi_v)


@dataclass(frozen=True, eq=False)
class BlockMeasurements:
    """``y_u`` (real, ``(..., p1)``) and integer ``y_v`` (``(..., m_size-p1)``).

    After embedding ``y_v`` holds the modified values ``z_v``.
    """

    y_u: np.ndarray
    y_v: np.ndarray

    def replace_v(self, y_v) -> BlockMeasurements:
        return BlockMeasurements(self.y_u, np.asarray(y_v, dtype=np.int64))

    def __eq__(self, other):
        if not isinstance(other, BlockMeasurements):
            return NotImplemented
        return np.array_equal(self.y_u, other.y_u) and np.array_equal(self.y_v, other.y_v)


def measure(sv: SparseBlockVector, mm: MeasurementMatrices) -> BlockMeasurements:
    if sv.p2 != mm.p2:
        raise ConfigurationError(
            f"v-part has {sv.p2} coefficients but phi_v expects {mm.p2}"
        )
    y_u = mm.alpha * sv.u
    y_v = round_half_away(sv.v @ mm.phi_v.T).astype(np.int64)
    return BlockMeasurements(y_u, y_v)


def invert_u(y_u, alpha: float) -> np.ndarray:
    if not alpha > 0:
        raise ConfigurationError("alpha must be positive")
    return np.asarray(y_u, dtype=np.float64) / alpha


def rip_ratio(mm: MeasurementMatrices, sv: SparseBlockVector) -> float:
    """``||phi_v s_v||^2 / (p2 ||s_v||^2)``; a diagnostic of norm preservation."""
    v = np.asarray(sv.v, dtype=np.float64).ravel()
    energy = float(v @ v)
    if energy == 0.0:
        raise ConfigurationError("rip_ratio is undefined for a zero v-part")
    proj = mm.phi_v @ v
    return float(proj @ proj) / (mm.p2 * energy)
