"""Image quality metrics and the scalar objective the optimizers maximize.

The objective rewards three things at once: strong edges (sum of Sobel
gradient magnitudes), many edge pixels (gradient above an automatic
threshold), and an even spread of gray levels (histogram entropy):

    score = ln(ln(edge_energy)) * edge_count / pixel_count * exp(entropy)

Degenerate images (no edge energy, or no pixels above threshold) score 0,
the worst possible value for a maximizer, instead of raising.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .image import GrayImage, histogram, local_mean_variance

__all__ = [
    "DVBV_THRESHOLD",
    "DVBV_WINDOW",
    "FitnessBreakdown",
    "DvBv",
    "sobel_magnitude",
    "auto_threshold",
    "edge_pixel_count",
    "entropy",
    "combine_fitness",
    "fitness",
    "dv_bv",
]

# Foreground/background split for the detail-variance metric: pixels whose
# 3x3 window variance exceeds 150 count as detail.
DVBV_THRESHOLD = 150.0
DVBV_WINDOW = 3

_OTSU_BINS = 256


@dataclass(frozen=True)
class FitnessBreakdown:
    """The objective value together with the factors it was built from.

    ``log_log_term`` is reported as 0.0 whenever the edge-energy guard fires,
    so fitness == log_log_term * edge_fraction * exp(entropy) holds for every
    breakdown. ``guarded`` records that one of the guards zeroed the score.
    """

    fitness: float
    edge_energy: float
    log_log_term: float
    edge_count: int
    edge_fraction: float
    entropy: float
    threshold: float
    guarded: bool


@dataclass(frozen=True)
class DvBv:
    """Mean 3x3 window variance split into detail (foreground) and background."""

    dv: float
    bv: float
    foreground_count: int
    background_count: int


def sobel_magnitude(img: GrayImage) -> np.ndarray:
    """Per-pixel Sobel gradient magnitude with clamp-to-edge borders.

    Horizontal and vertical responses use the 3x3 stencils
    [[-1,0,1],[-2,0,2],[-1,0,1]] and its transpose; the magnitude is their
    Euclidean norm.
    """
    p = np.pad(img.pixels.astype(np.float64), 1, mode="edge")
    h, w = img.pixels.shape
    nw, n, ne = p[0:h, 0:w], p[0:h, 1 : w + 1], p[0:h, 2 : w + 2]
    we, ea = p[1 : h + 1, 0:w], p[1 : h + 1, 2 : w + 2]
    sw, s, se = p[2 : h + 2, 0:w], p[2 : h + 2, 1 : w + 1], p[2 : h + 2, 2 : w + 2]
    dg = (ne + 2.0 * ea + se) - (nw + 2.0 * we + sw)
    dh = (se + 2.0 * s + sw) - (ne + 2.0 * n + nw)
    return np.sqrt(dg * dg + dh * dh)


def auto_threshold(grad: np.ndarray) -> float:
    """Otsu threshold over the gradient magnitudes.

    Magnitudes are binned into 256 equal-width bins over [0, max]; the cut
    maximizing the between-class variance is found (first maximum wins) and
    the upper edge of the last below-cut bin is returned. An all-zero map
    yields 0.0.
    """
    grad = np.asarray(grad, dtype=np.float64)
    gmax = float(grad.max())
    if gmax <= 0.0:
        return 0.0
    counts, _ = np.histogram(grad, bins=_OTSU_BINS, range=(0.0, gmax))
    p = counts / counts.sum()
    idx = np.arange(_OTSU_BINS, dtype=np.float64)
    w0 = np.cumsum(p)
    m0 = np.cumsum(p * idx)
    mt = m0[-1]
    w1 = 1.0 - w0
    valid = (w0 > 0.0) & (w1 > 0.0)
    between = np.zeros(_OTSU_BINS)
    between[valid] = (mt * w0[valid] - m0[valid]) ** 2 / (w0[valid] * w1[valid])
    cut = int(np.argmax(between))
    return (cut + 1) * gmax / _OTSU_BINS


def edge_pixel_count(grad: np.ndarray, threshold: float) -> int:
    """Number of pixels whose gradient magnitude strictly exceeds the threshold."""
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    return int(np.count_nonzero(np.asarray(grad) > threshold))


def entropy(img: GrayImage) -> float:
    """Shannon entropy (natural log) of the 256-bin intensity histogram.

    Empty bins contribute nothing; the result lies in [0, ln 256].
    """
    counts = histogram(img)
    p = counts[counts > 0] / img.pixel_count
    return float(-np.sum(p * np.log(p)))


def combine_fitness(
    edge_energy: float, edge_count: int, pixel_count: int, entropy_value: float
) -> tuple[float, float, bool]:
    """Fold the three factors into the scalar objective.

    Returns (fitness, log_log_term, guarded). The guard fires when
    edge_energy <= e (ln ln would be non-positive or undefined) or when no
    edge pixels were detected; a guarded score is exactly 0.0.
    """
    guarded = edge_energy <= math.e or edge_count == 0
    log_log_term = 0.0 if edge_energy <= math.e else math.log(math.log(edge_energy))
    value = log_log_term * (edge_count / pixel_count) * math.exp(entropy_value)
    return value, log_log_term, guarded


def fitness(img: GrayImage) -> FitnessBreakdown:
    """Score an image: Sobel map, automatic threshold, edge count, entropy."""
    grad = sobel_magnitude(img)
    edge_energy = float(grad.sum())
    threshold = auto_threshold(grad)
    edge_count = edge_pixel_count(grad, threshold)
    h = entropy(img)
    value, log_log_term, guarded = combine_fitness(edge_energy, edge_count, img.pixel_count, h)
    return FitnessBreakdown(
        fitness=value,
        edge_energy=edge_energy,
        log_log_term=log_log_term,
        edge_count=edge_count,
        edge_fraction=edge_count / img.pixel_count,
        entropy=h,
        threshold=threshold,
        guarded=guarded,
    )


def dv_bv(img: GrayImage) -> DvBv:
    """Detail variance / background variance of an image.

    Pixels whose 3x3 window population variance exceeds DVBV_THRESHOLD form
    the foreground; DV and BV are the mean variance of each class. An empty
    class reports 0.0 with count 0.
    """
    _, variance = local_mean_variance(img, DVBV_WINDOW)
    fg = variance > DVBV_THRESHOLD
    fg_count = int(np.count_nonzero(fg))
    bg_count = variance.size - fg_count
    dv = float(variance[fg].mean()) if fg_count else 0.0
    bv = float(variance[~fg].mean()) if bg_count else 0.0
    return DvBv(dv=dv, bv=bv, foreground_count=fg_count, background_count=bg_count)
