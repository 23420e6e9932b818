import numpy as np
import pytest

from gammapolymer.rng import stream


@pytest.fixture
def rng():
    return stream(12345, 0)


def pytest_configure(config):
    np.set_printoptions(precision=12)
