import numpy as np
import pytest

from pencilqp.oracle import random_pencil

N_RANDOM_PENCILS = 200


def make_random_pencils(count=N_RANDOM_PENCILS, seed=20240611):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(2, 9))
        out.append(random_pencil(rng, n))
    return out


@pytest.fixture(scope="session")
def random_pencils():
    return make_random_pencils()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
