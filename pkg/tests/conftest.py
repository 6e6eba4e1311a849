from functools import lru_cache

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from uchi.liealg import kappa, make_catalog_algebra

settings.register_profile("uchi", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("uchi")


@lru_cache(maxsize=None)
def algebra(name: str, p: int):
    return make_catalog_algebra(name, None, p)


def form(g, **coeffs) -> np.ndarray:
    """kappa of the element given by label=coefficient keywords."""
    return kappa(g, g.element(**coeffs))


@pytest.fixture
def sl2_3():
    return algebra("sl2", 3)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
