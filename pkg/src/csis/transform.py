"""Block DCT sparsification with zigzag coefficient ordering.

All functions operate on the last two axes, so a single ``(B, B)`` block and a
``(n, B, B)`` stack are handled alike.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.fft import dctn, idctn

from .errors import ConfigurationError


def dct2(block) -> np.ndarray:
    """Orthonormal 2-D DCT-II. Pixels are not level-shifted."""
    return dctn(np.asarray(block, dtype=np.float64), type=2, norm="ortho", axes=(-2, -1))


def idct2(coeffs) -> np.ndarray:
    return idctn(np.asarray(coeffs, dtype=np.float64), type=2, norm="ortho", axes=(-2, -1))


@lru_cache(maxsize=None)
def _zigzag(b: int) -> np.ndarray:
    cells = [(r, c) for r in range(b) for c in range(b)]
    # odd anti-diagonals run top-right to bottom-left, even ones the reverse
    cells.sort(key=lambda rc: (rc[0] + rc[1], rc[0] if (rc[0] + rc[1]) % 2 else rc[1]))
    out = np.array(cells, dtype=np.intp)
    out.setflags(write=False)
    return out


def zigzag_order(block_size: int) -> np.ndarray:
    """JPEG zigzag scan: row ``k`` holds the (row, col) of zigzag rank ``k``."""
    if block_size < 1:
        raise ConfigurationError("block size must be positive")
    return _zigzag(int(block_size))


@dataclass(frozen=True)
class SparseBlockVector:
    """Zigzag-ordered DCT coefficients, split into a ``u`` and a ``v`` part.

    ``coeffs`` has shape ``(..., B*B)``; a leading axis indexes blocks.
    """

    coeffs: np.ndarray
    p1: int

    @property
    def p2(self) -> int:
        return self.coeffs.shape[-1] - self.p1

    @property
    def u(self) -> np.ndarray:
        return self.coeffs[..., : self.p1]

    @property
    def v(self) -> np.ndarray:
        return self.coeffs[..., self.p1 :]

    @property
    def block_size(self) -> int:
        return int(round(np.sqrt(self.coeffs.shape[-1])))

    @classmethod
    def from_parts(cls, u, v) -> SparseBlockVector:
        u = np.asarray(u, dtype=np.float64)
        v = np.asarray(v, dtype=np.float64)
        return cls(np.concatenate([u, v], axis=-1), u.shape[-1])


def _check_p1(p1: int, n: int) -> None:
    if not 1 <= p1 < n:
        raise ConfigurationError(f"p1={p1} must lie in [1, {n})")


def sparsify(block, p1: int) -> SparseBlockVector:
    block = np.asarray(block, dtype=np.float64)
    b = block.shape[-1]
    if block.shape[-2] != b:
        raise ConfigurationError(f"blocks must be square, got {block.shape[-2:]}")
    _check_p1(p1, b * b)
    zz = zigzag_order(b)
    coeffs = dct2(block)[..., zz[:, 0], zz[:, 1]]
    return SparseBlockVector(coeffs, int(p1))


def densify(sv: SparseBlockVector) -> np.ndarray:
    b = sv.block_size
    zz = zigzag_order(b)
    grid = np.zeros(sv.coeffs.shape[:-1] + (b, b))
    grid[..., zz[:, 0], zz[:, 1]] = sv.coeffs
    return idct2(grid)
