import math

import pytest
from hypothesis import settings

from pdwtiling import quadcore, tiling

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

ALPHA9 = math.acos(-1.0 / (2.0 * math.sqrt(7.0)))
GAMMA9 = 4.0 * math.pi / 3.0
A9 = math.acos(1.0 / 3.0)


@pytest.fixture(scope="session")
def params9():
    return quadcore.TileParams(6, ALPHA9, GAMMA9)


@pytest.fixture(scope="session")
def tile9(params9):
    return quadcore.build_quadrangle(params9, A9)


@pytest.fixture(scope="session")
def pair9():
    return tiling.special_pair()


@pytest.fixture(scope="session")
def layouts9(tile9):
    return tiling.exhaustive_layouts(6, tile9, allow_reflection=True)
