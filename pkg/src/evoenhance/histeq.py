"""Global histogram equalization, the non-evolutionary baseline."""

from __future__ import annotations

import numpy as np

from .image import GrayImage, histogram

__all__ = ["equalization_map", "equalize"]


def equalization_map(img: GrayImage) -> np.ndarray:
    """The 256-entry level map v -> round(255 * cdf(v)), rounded half-up.

    The map is monotone non-decreasing because the cdf is.
    """
    cdf = np.cumsum(histogram(img)) / img.pixel_count
    return np.floor(255.0 * cdf + 0.5).astype(np.uint8)


def equalize(img: GrayImage) -> GrayImage:
    """Remap every pixel through the cumulative histogram of the image."""
    return GrayImage(equalization_map(img)[img.pixels])
