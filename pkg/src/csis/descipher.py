"""DES (FIPS 46-3) in ECB mode with a self-describing length frame.

Blocks are unsigned 64-bit integers, bit 1 of the standard tables being the
most significant bit.  Every permutation is evaluated through per-byte lookup
tables so a whole numpy array of blocks is processed at once.

Frame layout before encryption: 64-bit big-endian payload bit count, the
payload bits, then zero bits up to a multiple of 64.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigurationError, FramingError

# fmt: off
_IP = [58, 50, 42, 34, 26, 18, 10, 2, 60, 52, 44, 36, 28, 20, 12, 4,
       62, 54, 46, 38, 30, 22, 14, 6, 64, 56, 48, 40, 32, 24, 16, 8,
       57, 49, 41, 33, 25, 17, 9, 1, 59, 51, 43, 35, 27, 19, 11, 3,
       61, 53, 45, 37, 29, 21, 13, 5, 63, 55, 47, 39, 31, 23, 15, 7]
_FP = [40, 8, 48, 16, 56, 24, 64, 32, 39, 7, 47, 15, 55, 23, 63, 31,
       38, 6, 46, 14, 54, 22, 62, 30, 37, 5, 45, 13, 53, 21, 61, 29,
       36, 4, 44, 12, 52, 20, 60, 28, 35, 3, 43, 11, 51, 19, 59, 27,
       34, 2, 42, 10, 50, 18, 58, 26, 33, 1, 41, 9, 49, 17, 57, 25]
_E = [32, 1, 2, 3, 4, 5, 4, 5, 6, 7, 8, 9, 8, 9, 10, 11,
      12, 13, 12, 13, 14, 15, 16, 17, 16, 17, 18, 19, 20, 21, 20, 21,
      22, 23, 24, 25, 24, 25, 26, 27, 28, 29, 28, 29, 30, 31, 32, 1]
_P = [16, 7, 20, 21, 29, 12, 28, 17, 1, 15, 23, 26, 5, 18, 31, 10,
      2, 8, 24, 14, 32, 27, 3, 9, 19, 13, 30, 6, 22, 11, 4, 25]
_PC1 = [57, 49, 41, 33, 25, 17, 9, 1, 58, 50, 42, 34, 26, 18,
        10, 2, 59, 51, 43, 35, 27, 19, 11, 3, 60, 52, 44, 36,
        63, 55, 47, 39, 31, 23, 15, 7, 62, 54, 46, 38, 30, 22,
        14, 6, 61, 53, 45, 37, 29, 21, 13, 5, 28, 20, 12, 4]
_PC2 = [14, 17, 11, 24, 1, 5, 3, 28, 15, 6, 21, 10,
        23, 19, 12, 4, 26, 8, 16, 7, 27, 20, 13, 2,
        41, 52, 31, 37, 47, 55, 30, 40, 51, 45, 33, 48,
        44, 49, 39, 56, 34, 53, 46, 42, 50, 36, 29, 32]
_SHIFTS = [1, 1, 2, 2, 2, 2, 2, 2, 1, 2, 2, 2, 2, 2, 2, 1]
_SBOX = [
    [14, 4, 13, 1, 2, 15, 11, 8, 3, 10, 6, 12, 5, 9, 0, 7,
     0, 15, 7, 4, 14, 2, 13, 1, 10, 6, 12, 11, 9, 5, 3, 8,
     4, 1, 14, 8, 13, 6, 2, 11, 15, 12, 9, 7, 3, 10, 5, 0,
     15, 12, 8, 2, 4, 9, 1, 7, 5, 11, 3, 14, 10, 0, 6, 13],
    [15, 1, 8, 14, 6, 11, 3, 4, 9, 7, 2, 13, 12, 0, 5, 10,
     3, 13, 4, 7, 15, 2, 8, 14, 12, 0, 1, 10, 6, 9, 11, 5,
     0, 14, 7, 11, 10, 4, 13, 1, 5, 8, 12, 6, 9, 3, 2, 15,
     13, 8, 10, 1, 3, 15, 4, 2, 11, 6, 7, 12, 0, 5, 14, 9],
    [10, 0, 9, 14, 6, 3, 15, 5, 1, 13, 12, 7, 11, 4, 2, 8,
     13, 7, 0, 9, 3, 4, 6, 10, 2, 8, 5, 14, 12, 11, 15, 1,
     13, 6, 4, 9, 8, 15, 3, 0, 11, 1, 2, 12, 5, 10, 14, 7,
     1, 10, 13, 0, 6, 9, 8, 7, 4, 15, 14, 3, 11, 5, 2, 12],
    [7, 13, 14, 3, 0, 6, 9, 10, 1, 2, 8, 5, 11, 12, 4, 15,
     13, 8, 11, 5, 6, 15, 0, 3, 4, 7, 2, 12, 1, 10, 14, 9,
     10, 6, 9, 0, 12, 11, 7, 13, 15, 1, 3, 14, 5, 2, 8, 4,
     3, 15, 0, 6, 10, 1, 13, 8, 9, 4, 5, 11, 12, 7, 2, 14],
    [2, 12, 4, 1, 7, 10, 11, 6, 8, 5, 3, 15, 13, 0, 14, 9,
     14, 11, 2, 12, 4, 7, 13, 1, 5, 0, 15, 10, 3, 9, 8, 6,
     4, 2, 1, 11, 10, 13, 7, 8, 15, 9, 12, 5, 6, 3, 0, 14,
     11, 8, 12, 7, 1, 14, 2, 13, 6, 15, 0, 9, 10, 4, 5, 3],
    [12, 1, 10, 15, 9, 2, 6, 8, 0, 13, 3, 4, 14, 7, 5, 11,
     10, 15, 4, 2, 7, 12, 9, 5, 6, 1, 13, 14, 0, 11, 3, 8,
     9, 14, 15, 5, 2, 8, 12, 3, 7, 0, 4, 10, 1, 13, 11, 6,
     4, 3, 2, 12, 9, 5, 15, 10, 11, 14, 1, 7, 6, 0, 8, 13],
    [4, 11, 2, 14, 15, 0, 8, 13, 3, 12, 9, 7, 5, 10, 6, 1,
     13, 0, 11, 7, 4, 9, 1, 10, 14, 3, 5, 12, 2, 15, 8, 6,
     1, 4, 11, 13, 12, 3, 7, 14, 10, 15, 6, 8, 0, 5, 9, 2,
     6, 11, 13, 8, 1, 4, 10, 7, 9, 5, 0, 15, 14, 2, 3, 12],
    [13, 2, 8, 4, 6, 15, 11, 1, 10, 9, 3, 14, 5, 0, 12, 7,
     1, 15, 13, 8, 10, 3, 7, 4, 12, 5, 6, 11, 0, 14, 9, 2,
     7, 11, 4, 1, 9, 12, 14, 2, 0, 6, 10, 13, 15, 3, 5, 8,
     2, 1, 14, 7, 4, 10, 8, 13, 15, 12, 9, 0, 3, 5, 6, 11],
]
# fmt: on


def _permute_int(x: int, table, in_bits: int) -> int:
    out = 0
    for src in table:
        out = (out << 1) | ((x >> (in_bits - src)) & 1)
    return out


def _byte_tables(table, in_bits: int) -> list[np.ndarray]:
    n_bytes = in_bits // 8
    tables = []
    for k in range(n_bytes):
        shift = 8 * (n_bytes - 1 - k)
        tables.append(
            np.array(
                [_permute_int(v << shift, table, in_bits) for v in range(256)],
                dtype=np.uint64,
            )
        )
    return tables


def _apply(tables, x: np.ndarray) -> np.ndarray:
    n = len(tables)
    out = np.zeros_like(x)
    for k, t in enumerate(tables):
        out |= t[(x >> np.uint64(8 * (n - 1 - k))) & np.uint64(0xFF)]
    return out


_IP_T = _byte_tables(_IP, 64)
_FP_T = _byte_tables(_FP, 64)
_E_T = _byte_tables(_E, 32)


def _sp_tables() -> list[np.ndarray]:
    out = []
    for i, box in enumerate(_SBOX):
        entries = []
        for v in range(64):
            row = ((v >> 4) & 0b10) | (v & 1)
            col = (v >> 1) & 0xF
            entries.append(_permute_int(box[16 * row + col] << (28 - 4 * i), _P, 32))
        out.append(np.array(entries, dtype=np.uint64))
    return out


_SP_T = _sp_tables()
_M32 = np.uint64(0xFFFFFFFF)


def _subkeys(key: int) -> tuple[int, ...]:
    cd = _permute_int(key, _PC1, 64)
    c, d = cd >> 28, cd & 0xFFFFFFF
    keys = []
    for s in _SHIFTS:
        c = ((c << s) | (c >> (28 - s))) & 0xFFFFFFF
        d = ((d << s) | (d >> (28 - s))) & 0xFFFFFFF
        keys.append(_permute_int((c << 28) | d, _PC2, 56))
    return tuple(keys)


class DesKey:
    """A 64-bit DES key (parity bits ignored) with its precomputed schedule."""

    def __init__(self, key):
        if isinstance(key, str):
            key = key.strip()
            if len(key) != 16:
                raise ConfigurationError("DES key must be 16 hex characters")
            try:
                key = bytes.fromhex(key)
            except ValueError as exc:
                raise ConfigurationError(f"bad DES key hex: {exc}") from None
        if isinstance(key, (bytes, bytearray)):
            if len(key) != 8:
                raise ConfigurationError("DES key must be 8 bytes")
            key = int.from_bytes(key, "big")
        key = int(key)
        if not 0 <= key < 1 << 64:
            raise ConfigurationError("DES key must fit in 64 bits")
        self.value = key
        self.subkeys = np.array(_subkeys(key), dtype=np.uint64)

    @classmethod
    def from_hex(cls, text: str) -> DesKey:
        return cls(text)

    def hex(self) -> str:
        return f"{self.value:016X}"

    def __eq__(self, other):
        return isinstance(other, DesKey) and self.value == other.value

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return f"DesKey({self.hex()!r})"


def _crypt(blocks, key: DesKey, decrypt: bool) -> np.ndarray:
    x = np.atleast_1d(np.asarray(blocks, dtype=np.uint64))
    x = _apply(_IP_T, x)
    left, right = x >> np.uint64(32), x & _M32
    ks = key.subkeys[::-1] if decrypt else key.subkeys
    for k in ks:
        e = _apply(_E_T, right) ^ k
        f = np.zeros_like(right)
        for i, sp in enumerate(_SP_T):
            f |= sp[(e >> np.uint64(42 - 6 * i)) & np.uint64(0x3F)]
        left, right = right, left ^ f
    return _apply(_FP_T, (right << np.uint64(32)) | left)


def des_encrypt_blocks(blocks, key: DesKey) -> np.ndarray:
    return _crypt(blocks, key, decrypt=False)


def des_decrypt_blocks(blocks, key: DesKey) -> np.ndarray:
    return _crypt(blocks, key, decrypt=True)


def des_encrypt_block(block: int, key: DesKey) -> int:
    return int(_crypt([block], key, decrypt=False)[0])


def des_decrypt_block(block: int, key: DesKey) -> int:
    return int(_crypt([block], key, decrypt=True)[0])


def bits_to_blocks(bits) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.uint8).ravel()
    if bits.size % 64:
        raise ConfigurationError("bit count must be a multiple of 64")
    return np.packbits(bits).view(">u8").astype(np.uint64)


def blocks_to_bits(blocks) -> np.ndarray:
    be = np.asarray(blocks, dtype=np.uint64).astype(">u8")
    return np.unpackbits(be.view(np.uint8))


def framed_length(n_bits: int) -> int:
    """Ciphertext bits produced for an ``n_bits`` payload."""
    return 64 * -(-(64 + n_bits) // 64)


def encrypt_payload(bits, key: DesKey) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.uint8).ravel()
    frame = np.zeros(framed_length(bits.size), dtype=np.uint8)
    frame[:64] = blocks_to_bits([bits.size])
    frame[64 : 64 + bits.size] = bits
    return blocks_to_bits(des_encrypt_blocks(bits_to_blocks(frame), key))


def decrypt_payload(ciphertext, key: DesKey) -> np.ndarray:
    """Decrypt a framed ciphertext; bits past the frame are ignored."""
    ct = np.asarray(ciphertext, dtype=np.uint8).ravel()
    if ct.size < 64:
        raise FramingError(f"need at least 64 ciphertext bits, got {ct.size}")
    n_bits = int(des_decrypt_blocks(bits_to_blocks(ct[:64]), key)[0])
    total = framed_length(n_bits)
    if total > ct.size:
        raise FramingError(
            f"frame announces {n_bits} payload bits ({total} ciphertext bits) "
            f"but only {ct.size} are available; wrong key or corrupted stego-data"
        )
    plain = blocks_to_bits(des_decrypt_blocks(bits_to_blocks(ct[64:total]), key))
    return plain[:n_bits]
