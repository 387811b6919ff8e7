"""Deterministic synthetic test scenes for experiments and the test suite."""

from __future__ import annotations

import numpy as np

from .image import GrayImage

__all__ = ["low_contrast_scene", "checkerboard"]


def low_contrast_scene(size: int = 128, seed: int = 97) -> GrayImage:
    """A reproducible dark, low-contrast scene with real enhancement headroom.

    Combines an illumination ramp, a bright disc, a dark rectangle, a thin
    grid and seeded fine texture, then compresses everything into a narrow
    band of dark gray levels. A dull, underexposed image like this is the
    regime the contrast transform is built for: its gain term scales with
    the global and local intensity, so a dark input leaves room to stretch
    before the 8-bit clamp bites.
    """
    if size < 16:
        raise ValueError("scene size must be at least 16")
    rng = np.random.default_rng(seed)
    y, x = np.mgrid[0:size, 0:size].astype(np.float64) / (size - 1)

    field = 0.45 + 0.25 * x + 0.10 * y
    field += 0.20 * (((x - 0.35) ** 2 + (y - 0.40) ** 2) < 0.035)
    field -= 0.18 * ((np.abs(x - 0.72) < 0.13) & (np.abs(y - 0.32) < 0.20))
    field += 0.12 * (((y - 0.78) ** 2 + (x - 0.25) ** 2) < 0.008)

    cols = np.arange(size) % max(size // 8, 2) == 0
    rows = np.arange(size) % max(size // 10, 2) == 0
    field[:, cols] += 0.08
    field[rows, :] -= 0.06

    field += rng.normal(0.0, 0.02, size=(size, size))

    field -= field.min()
    field /= field.max()
    levels = 18.0 + 52.0 * field
    return GrayImage(np.floor(levels + 0.5).astype(np.uint8))


def checkerboard(size: int = 8, low: int = 0, high: int = 255) -> GrayImage:
    """Alternating two-level pattern, handy as a dense-edge fixture."""
    y, x = np.mgrid[0:size, 0:size]
    return GrayImage(np.where((x + y) % 2 == 0, low, high).astype(np.uint8))
