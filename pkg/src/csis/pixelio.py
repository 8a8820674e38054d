"""Binary PNM (P5/P6) I/O, block decomposition and channel handling.

Pixel arrays are always ``(height, width, channels)`` uint8.  Block stacks
are ``(n_blocks, B, B)`` float arrays in raster order (left to right, then
top to bottom).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, FormatError

_MAGIC_CHANNELS = {b"P5": 1, b"P6": 3}


@dataclass(frozen=True, eq=False)
class Image:
    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim == 2:
            px = px[:, :, None]
        if px.ndim != 3 or px.shape[2] not in (1, 3):
            raise ConfigurationError(f"bad pixel array shape {px.shape}")
        if px.dtype != np.uint8:
            if px.size and (px.min() < 0 or px.max() > 255):
                raise ConfigurationError("intensities must lie in [0, 255]")
            px = px.astype(np.uint8)
        object.__setattr__(self, "pixels", px)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def channels(self) -> int:
        return self.pixels.shape[2]

    @property
    def plane(self) -> np.ndarray:
        """2-D view of a single-channel image."""
        if self.channels != 1:
            raise ConfigurationError("plane is only defined for one channel")
        return self.pixels[:, :, 0]

    def __eq__(self, other):
        if not isinstance(other, Image):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and bool(
            np.array_equal(self.pixels, other.pixels)
        )


def _read_token(data: bytes, pos: int) -> tuple[bytes, int, int]:
    """Next whitespace-delimited token after skipping comments: (token, start, end)."""
    n = len(data)
    while pos < n:
        c = data[pos : pos + 1]
        if c == b"#":
            while pos < n and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif c.isspace():
            pos += 1
        else:
            break
    start = pos
    while pos < n and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
        pos += 1
    if start == pos:
        raise FormatError("truncated PNM header", offset=start)
    return data[start:pos], start, pos


def load_pnm(data: bytes) -> Image:
    """Parse a binary P5 (grayscale) or P6 (RGB) image with maxval 255."""
    data = bytes(data)
    magic, _, pos = _read_token(data, 0)
    if magic not in _MAGIC_CHANNELS:
        raise FormatError(f"unsupported PNM magic {magic!r}", offset=0)
    channels = _MAGIC_CHANNELS[magic]
    fields = []
    for _ in range(3):
        tok, tok_start, pos = _read_token(data, pos)
        if not tok.isdigit():
            raise FormatError(f"expected an integer, got {tok!r}", offset=tok_start)
        fields.append((int(tok), tok_start))
    (width, _), (height, _), (maxval, maxval_at) = fields
    if maxval != 255:
        raise FormatError(f"unsupported maxval {maxval}", offset=maxval_at)
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise FormatError("missing whitespace after maxval", offset=pos)
    pos += 1
    size = width * height * channels
    raster = data[pos : pos + size]
    if len(raster) < size:
        raise FormatError(
            f"truncated raster: expected {size} bytes, found {len(raster)}",
            offset=pos + len(raster),
        )
    pixels = np.frombuffer(raster, dtype=np.uint8).reshape(height, width, channels)
    return Image(pixels.copy())


def save_pnm(img: Image) -> bytes:
    magic = b"P5" if img.channels == 1 else b"P6"
    header = b"%s\n%d %d\n255\n" % (magic, img.width, img.height)
    return header + np.ascontiguousarray(img.pixels).tobytes()


def read_image(path) -> Image:
    with open(path, "rb") as fh:
        return load_pnm(fh.read())


def write_image(path, img: Image) -> None:
    with open(path, "wb") as fh:
        fh.write(save_pnm(img))


def split_blocks(plane, block_size: int) -> np.ndarray:
    """Cut a single-channel plane into non-overlapping ``B x B`` blocks.

    Accepts an :class:`Image` with one channel or a 2-D array.  Returns a
    float64 stack of shape ``(r1*r2/B**2, B, B)`` in raster order.
    """
    arr = plane.plane if isinstance(plane, Image) else np.asarray(plane)
    if arr.ndim != 2:
        raise ConfigurationError("split_blocks needs a single-channel plane")
    h, w = arr.shape
    b = int(block_size)
    if b < 1 or h % b or w % b:
        raise ConfigurationError(
            f"block size {b} does not divide image dimensions {w}x{h}"
        )
    blocks = arr.reshape(h // b, b, w // b, b).swapaxes(1, 2).reshape(-1, b, b)
    return blocks.astype(np.float64)


def round_half_away(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def to_pixels(values) -> np.ndarray:
    """Real values -> uint8: round half away from zero, then clamp."""
    return np.clip(round_half_away(values), 0, 255).astype(np.uint8)


def merge_blocks(blocks, width: int, height: int) -> Image:
    blocks = np.asarray(blocks, dtype=np.float64)
    if blocks.ndim != 3 or blocks.shape[1] != blocks.shape[2]:
        raise ConfigurationError(f"expected a (n, B, B) stack, got {blocks.shape}")
    n, b, _ = blocks.shape
    if n * b * b != width * height or width % b or height % b:
        raise ConfigurationError(
            f"{n} blocks of side {b} cannot tile a {width}x{height} image"
        )
    plane = blocks.reshape(height // b, width // b, b, b).swapaxes(1, 2)
    return Image(to_pixels(plane.reshape(height, width)))


def split_channels(img: Image) -> list[Image]:
    return [Image(img.pixels[:, :, c].copy()) for c in range(img.channels)]


def merge_channels(planes) -> Image:
    planes = list(planes)
    if len(planes) not in (1, 3):
        raise ConfigurationError(f"cannot merge {len(planes)} channels")
    return Image(np.concatenate([p.pixels for p in planes], axis=2))
