import numpy as np
import pytest

import quasikit as qk


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def m4():
    return qk.matrix_algebra(4)


@pytest.fixture(scope="session")
def m8():
    return qk.matrix_algebra(8)


@pytest.fixture(scope="session")
def m1():
    return qk.matrix_algebra(1)


@pytest.fixture(scope="session")
def circle():
    return qk.smooth_circle_algebra(8)


def scalar(alg, z):
    return alg.element([[complex(z)]])
