import numpy as np
import pytest

from covercode.gf import field_of_order


@pytest.fixture
def F3():
    return field_of_order(3)


@pytest.fixture
def F2():
    return field_of_order(2)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
