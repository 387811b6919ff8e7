"""Gray-scale raster type, PGM/PNG file IO, histograms and window statistics.

Everything downstream (the contrast transform, the edge metrics, the
optimizers' objective) consumes the types defined here. All functions are
pure and safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "FormatError",
    "GrayImage",
    "StatMaps",
    "load_image",
    "save_image",
    "global_mean",
    "local_stats",
    "local_mean_variance",
    "histogram",
]

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"
_WHITESPACE = b" \t\n\r\x0b\x0c"


class FormatError(ValueError):
    """Raised for files that are not binary PGM (P5, maxval 255) or 8-bit grayscale PNG."""


@dataclass(frozen=True, eq=False)
class GrayImage:
    """8-bit single-channel raster stored row-major as a (height, width) uint8 array.

    Both sides must be at least 3 pixels so that every image admits a full
    3x3 window and a Sobel stencil.
    """

    pixels: np.ndarray

    def __post_init__(self) -> None:
        px = np.asarray(self.pixels)
        if px.ndim != 2:
            raise ValueError(f"expected a 2-d pixel array, got shape {px.shape}")
        if px.shape[0] < 3 or px.shape[1] < 3:
            raise ValueError(f"image must be at least 3x3, got {px.shape[1]}x{px.shape[0]}")
        if px.dtype != np.uint8:
            if not np.issubdtype(px.dtype, np.integer):
                raise ValueError("pixel values must be integers")
            if int(px.min()) < 0 or int(px.max()) > 255:
                raise ValueError("pixel values must lie in [0, 255]")
            px = px.astype(np.uint8)
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def pixel_count(self) -> int:
        return self.pixels.size


@dataclass(frozen=True, eq=False)
class StatMaps:
    """Per-pixel window mean/std maps plus the global intensity mean of one image.

    ``mean`` and ``std`` have the same shape as the source image; ``std`` is
    the population standard deviation over the window (divide by window
    area, not area - 1). Windows are centered and use clamp-to-edge
    replication, so the maps are defined at every pixel.
    """

    window: int
    mean: np.ndarray
    std: np.ndarray
    global_mean: float


def load_image(path: str | Path) -> GrayImage:
    """Read a binary PGM (P5, maxval 255) or an 8-bit grayscale PNG.

    The format is sniffed from the file's magic bytes, not the extension.
    """
    data = Path(path).read_bytes()
    if data[:2] == b"P5":
        return _parse_pgm(data)
    if data[:8] == _PNG_MAGIC:
        return _load_png(path)
    raise FormatError("unsupported format (want binary PGM P5 or 8-bit grayscale PNG)")


def save_image(img: GrayImage, path: str | Path) -> None:
    """Write ``img`` as binary PGM; load_image(save_image(x)) is bit-exact."""
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + img.pixels.tobytes())


def _next_token(data: bytes, pos: int) -> tuple[bytes, int]:
    # Skip whitespace and '#' comment lines between header fields.
    n = len(data)
    while pos < n:
        c = data[pos]
        if c in _WHITESPACE:
            pos += 1
        elif c == ord("#"):
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
        else:
            break
    start = pos
    while pos < n and data[pos] not in _WHITESPACE:
        pos += 1
    if start == pos:
        raise FormatError("truncated PGM header")
    return data[start:pos], pos


def _parse_pgm(data: bytes) -> GrayImage:
    pos = 2
    fields = []
    for _ in range(3):
        token, pos = _next_token(data, pos)
        try:
            fields.append(int(token))
        except ValueError as exc:
            raise FormatError(f"non-numeric PGM header field {token!r}") from exc
    width, height, maxval = fields
    if maxval != 255:
        raise FormatError(f"unsupported maxval {maxval} (want 255)")
    if width <= 0 or height <= 0:
        raise FormatError(f"invalid PGM dimensions {width}x{height}")
    # Exactly one whitespace byte separates the maxval from the raster.
    raster = data[pos + 1 : pos + 1 + width * height]
    if len(raster) < width * height:
        raise FormatError("PGM raster shorter than width*height")
    return GrayImage(np.frombuffer(raster, dtype=np.uint8).reshape(height, width))


def _load_png(path: str | Path) -> GrayImage:
    try:
        from PIL import Image
    except ImportError as exc:  # pragma: no cover
        raise FormatError("PNG support requires pillow") from exc
    with Image.open(path) as im:
        if im.mode != "L":
            raise FormatError(f"unsupported PNG mode {im.mode!r} (want 8-bit grayscale)")
        return GrayImage(np.asarray(im, dtype=np.uint8))


def global_mean(img: GrayImage) -> float:
    """Mean intensity over the whole image, in [0, 255]."""
    return float(img.pixels.mean(dtype=np.float64))


def _window_sums(values: np.ndarray, n: int) -> np.ndarray:
    """Exact n x n window sums, centered, clamp-to-edge, via an integral image.

    ``values`` must be integer-valued; all accumulation stays in int64 so the
    sums are exact.
    """
    r = n // 2
    padded = np.pad(values.astype(np.int64), r, mode="edge")
    integral = np.zeros((padded.shape[0] + 1, padded.shape[1] + 1), dtype=np.int64)
    np.cumsum(padded, axis=0, out=integral[1:, 1:])
    np.cumsum(integral[1:, 1:], axis=1, out=integral[1:, 1:])
    return integral[n:, n:] - integral[:-n, n:] - integral[n:, :-n] + integral[:-n, :-n]


def local_mean_variance(img: GrayImage, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-pixel mean and population variance over centered n x n windows.

    Border windows replicate the edge pixel. The variance numerator
    (area * sum(x^2) - sum(x)^2) is computed exactly in integer arithmetic,
    so results carry a single rounding and the variance is never negative.
    """
    if n % 2 == 0 or n < 1:
        raise ValueError(f"window size must be an odd positive integer, got {n}")
    px = img.pixels.astype(np.int64)
    s1 = _window_sums(px, n)
    s2 = _window_sums(px * px, n)
    area = n * n
    mean = s1 / float(area)
    variance = (area * s2 - s1 * s1) / float(area * area)
    return mean, variance


def local_stats(img: GrayImage, n: int = 3) -> StatMaps:
    """Compute the window mean/std maps and global mean used by the transform."""
    mean, variance = local_mean_variance(img, n)
    return StatMaps(window=n, mean=mean, std=np.sqrt(variance), global_mean=global_mean(img))


def histogram(img: GrayImage) -> np.ndarray:
    """256-bin intensity histogram; counts sum to width * height."""
    return np.bincount(img.pixels.ravel(), minlength=256)
