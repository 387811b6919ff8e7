"""Four-parameter local contrast transform applied pixel-wise.

The transform combines the image's global mean with per-pixel window
statistics:

    v = k * M / (sigma + b) * (u - c * mu) + mu ** a

where u is the input pixel, M the global mean, mu/sigma the window
mean/std at that pixel, and (a, b, c, k) the tunable parameters the
optimizers search over. The real-valued result is clamped to [0, 255]
and rounded half-up to give a displayable 8-bit image.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .image import GrayImage, StatMaps

__all__ = [
    "DENOM_EPS",
    "EnhanceParams",
    "ParamBounds",
    "default_bounds",
    "transform_values",
    "apply_transform",
]

# The search box allows b = 0; the guard keeps the division total at sigma = 0.
DENOM_EPS = 1e-6

_DEFAULT_LO = (0.0, 0.0, 0.0, 0.5)
_DEFAULT_HI = (1.5, 1.0, 0.5, 1.5)


@dataclass(frozen=True)
class EnhanceParams:
    """Solution vector (a, b, c, k) for the transform."""

    a: float
    b: float
    c: float
    k: float

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, self.k], dtype=np.float64)

    @classmethod
    def from_array(cls, vec) -> "EnhanceParams":
        a, b, c, k = (float(v) for v in vec)
        return cls(a, b, c, k)


@dataclass(frozen=True, eq=False)
class ParamBounds:
    """Box constraints for the search: lo[d] < hi[d] per dimension."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self) -> None:
        lo = np.asarray(self.lo, dtype=np.float64)
        hi = np.asarray(self.hi, dtype=np.float64)
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError("bounds must be 1-d arrays of equal length")
        if not np.all(lo < hi):
            raise ValueError("every lower bound must be strictly below its upper bound")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def ndim(self) -> int:
        return self.lo.size

    def clip(self, vec: np.ndarray) -> np.ndarray:
        return np.clip(vec, self.lo, self.hi)

    def contains(self, vec: np.ndarray) -> bool:
        return bool(np.all(vec >= self.lo) and np.all(vec <= self.hi))

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Uniform sample of shape (size, ndim), one row per individual."""
        return rng.uniform(self.lo, self.hi, size=(size, self.ndim))


def default_bounds() -> ParamBounds:
    """The standard search box: a in [0,1.5], b in [0,1], c in [0,0.5], k in [0.5,1.5]."""
    return ParamBounds(np.array(_DEFAULT_LO), np.array(_DEFAULT_HI))


def transform_values(img: GrayImage, params: EnhanceParams, stats: StatMaps) -> np.ndarray:
    """Real-valued, pre-clamp transform output; exposed for analysis and tests.

    Strictly increasing in the input pixel at fixed window statistics
    whenever k * M > 0.
    """
    if stats.mean.shape != img.pixels.shape:
        raise ValueError(
            f"stats shape {stats.mean.shape} does not match image shape {img.pixels.shape}"
        )
    u = img.pixels.astype(np.float64)
    denom = np.maximum(stats.std + params.b, DENOM_EPS)
    gain = (params.k * stats.global_mean) / denom
    # np.power(0.0, 0.0) == 1.0, which is the convention we want for mu ** a.
    return gain * (u - params.c * stats.mean) + np.power(stats.mean, params.a)


def apply_transform(img: GrayImage, params: EnhanceParams, stats: StatMaps) -> GrayImage:
    """Apply the transform and quantize: clamp to [0, 255], round half-up."""
    v = np.clip(transform_values(img, params, stats), 0.0, 255.0)
    return GrayImage(np.floor(v + 0.5).astype(np.uint8))
