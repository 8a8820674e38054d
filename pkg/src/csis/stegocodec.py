"""Two-bits-per-measurement embedding into integer compressed-sensing samples.

A dibit is an int in ``0..3`` whose high bit is the first bit of the pair
(``0b01`` is the pair "01").  Measurements in the skip set ``{-1, 0, 1}``
carry nothing.  Stream order is the C order of the ``y_v`` array: block by
block, and within a block by measurement index.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import CapacityError, ContractError, ConfigurationError
from .sensing import BlockMeasurements

SKIP_SET = (-1, 0, 1)


def is_permissible(y: int) -> bool:
    return y not in SKIP_SET


def _check_dibit(s: int) -> int:
    if isinstance(s, str):
        s = int(s, 2)
    if s not in (0, 1, 2, 3):
        raise ContractError(f"dibit must be in 0..3, got {s!r}")
    return s


def embed_pair(y: int, s) -> int:
    """Modify one permissible measurement so that it carries dibit ``s``."""
    y = int(y)
    s = _check_dibit(s)
    if not is_permissible(y):
        raise ContractError(f"cannot embed into skip-set value {y}")
    if y % 2 == 0:
        if y % 4 == 0:
            if s == 0b00:
                return y + 1
            if s == 0b01:
                return y
            if s == 0b10:
                return y - 1
            return y + 2 if y > 0 else y - 2
        if s == 0b00:
            return y - 1 if y != 2 else y + 3
        if s == 0b01:
            return y + 2 if y != -2 else y - 2
        if s == 0b10:
            return y + 1 if y != -2 else y - 3
        return y
    if (y - 1) % 4 == 0:
        return y + (0, -1, -2, +1)[s]
    return y + (+2, +1, 0, -1)[s]


def extract_pair(z: int) -> int:
    z = int(z)
    if not is_permissible(z):
        raise ContractError(f"skip-set value {z} carries no data")
    if z % 2 == 0:
        return 0b01 if z % 4 == 0 else 0b11
    return 0b00 if (z - 1) % 4 == 0 else 0b10


# offsets indexed [y mod 4, dibit]; sign- and value-specific cases patched below
_OFFSETS = np.array(
    [
        [+1, 0, -1, +2],  # y = 0 mod 4; 11 -> -2 when y < 0
        [0, -1, -2, +1],  # y = 1 mod 4
        [-1, +2, +1, 0],  # y = 2 mod 4; y = 2 and y = -2 are special
        [+2, +1, 0, -1],  # y = 3 mod 4
    ],
    dtype=np.int64,
)
# dibit for each z mod 4
_DECODE = np.array([0b01, 0b00, 0b11, 0b10], dtype=np.int64)


def embed_values(y, dibits) -> np.ndarray:
    """Vectorised :func:`embed_pair` over aligned arrays."""
    y = np.asarray(y, dtype=np.int64)
    s = np.asarray(dibits, dtype=np.int64)
    if np.any(np.abs(y) <= 1):
        raise ContractError("cannot embed into skip-set values")
    r = y % 4
    c = _OFFSETS[r, s]
    c = np.where((r == 0) & (s == 3) & (y < 0), -2, c)
    c = np.where((y == 2) & (s == 0), +3, c)
    c = np.where((y == -2) & (s == 1), -2, c)
    c = np.where((y == -2) & (s == 2), -3, c)
    return y + c


def extract_values(z) -> np.ndarray:
    return _DECODE[np.asarray(z, dtype=np.int64) % 4]


def bits_to_dibits(bits) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.int64).ravel()
    if bits.size % 2:
        raise ContractError("payload must hold an even number of bits")
    return bits[0::2] * 2 + bits[1::2]


def dibits_to_bits(dibits) -> np.ndarray:
    d = np.asarray(dibits, dtype=np.uint8).ravel()
    out = np.empty(2 * d.size, dtype=np.uint8)
    out[0::2] = d >> 1
    out[1::2] = d & 1
    return out


def permissible_mask(measurements: BlockMeasurements) -> np.ndarray:
    return np.abs(np.asarray(measurements.y_v)) > 1


def capacity(measurements) -> int:
    """Maximum payload in bits: two per permissible measurement.

    Accepts a :class:`BlockMeasurements` or an iterable of them.
    """
    if isinstance(measurements, BlockMeasurements):
        measurements = [measurements]
    return 2 * sum(int(np.count_nonzero(permissible_mask(m))) for m in measurements)


def embed_stream(payload, measurements: BlockMeasurements) -> BlockMeasurements:
    dibits = bits_to_dibits(payload)
    y_v = np.asarray(measurements.y_v, dtype=np.int64)
    flat = y_v.ravel()
    slots = np.flatnonzero(np.abs(flat) > 1)
    if dibits.size > slots.size:
        raise CapacityError(available=2 * slots.size, required=2 * dibits.size)
    out = flat.copy()
    used = slots[: dibits.size]
    out[used] = embed_values(flat[used], dibits)
    return measurements.replace_v(out.reshape(y_v.shape))


def extract_stream(measurements: BlockMeasurements) -> np.ndarray:
    flat = np.asarray(measurements.y_v, dtype=np.int64).ravel()
    return dibits_to_bits(extract_values(flat[np.abs(flat) > 1]))


def ber(a, b) -> float:
    """Bit error rate in percent."""
    a = np.asarray(a, dtype=np.uint8).ravel()
    b = np.asarray(b, dtype=np.uint8).ravel()
    if a.size != b.size:
        raise ConfigurationError(f"length mismatch: {a.size} vs {b.size} bits")
    if a.size == 0:
        return 0.0
    return 100.0 * np.count_nonzero(a ^ b) / a.size


class AddSubProfile(NamedTuple):
    p_add: float
    p_sub: float
    modified: int


def add_sub_profile(before: BlockMeasurements, after: BlockMeasurements) -> AddSubProfile:
    y = np.asarray(before.y_v, dtype=np.int64)
    z = np.asarray(after.y_v, dtype=np.int64)
    if y.shape != z.shape:
        raise ConfigurationError(f"shape mismatch: {y.shape} vs {z.shape}")
    delta = (z - y).ravel()
    changed = np.count_nonzero(delta)
    if changed == 0:
        return AddSubProfile(0.0, 0.0, 0)
    return AddSubProfile(
        np.count_nonzero(delta > 0) / changed,
        np.count_nonzero(delta < 0) / changed,
        int(changed),
    )
