import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from evoenhance.image import GrayImage

settings.register_profile(
    "suite",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_image(rng, height=None, width=None, lo=0, hi=256) -> GrayImage:
    h = int(height if height is not None else rng.integers(3, 17))
    w = int(width if width is not None else rng.integers(3, 17))
    return GrayImage(rng.integers(lo, hi, size=(h, w), dtype=np.int64))


@pytest.fixture
def constant_image():
    def make(value, size=4):
        return GrayImage(np.full((size, size), value, dtype=np.uint8))

    return make
