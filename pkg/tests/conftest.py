import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("suite", deadline=None, max_examples=30)
settings.load_profile("suite")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def lat13():
    from toric3d.stabilizer import FiniteLattice

    return FiniteLattice(13)


@pytest.fixture(scope="session")
def lat11():
    from toric3d.stabilizer import FiniteLattice

    return FiniteLattice(11)


@pytest.fixture(scope="session")
def lat9():
    from toric3d.stabilizer import FiniteLattice

    return FiniteLattice(9)
