import numpy as np
import pytest

INV_E = 1.0 / np.e


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240601)
