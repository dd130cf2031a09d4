import numpy as np
import pytest
from hypothesis import settings

from beurlinglab.experiments import smooth_random_field
from beurlinglab.field import make_grid

settings.register_profile("default", max_examples=25, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def g256():
    return make_grid(8, 256)


@pytest.fixture(scope="session")
def g64():
    return make_grid(8, 64)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def random_field():
    def make(grid, seed=0, modes=6):
        return smooth_random_field(grid, np.random.default_rng(seed), modes)

    return make
