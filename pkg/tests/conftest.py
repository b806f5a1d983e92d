import numpy as np
import pytest

from unireduce import close_group

X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)
SWAP3 = np.eye(3)[[1, 0, 2]].astype(complex)
CYCLE3 = np.eye(3)[[2, 0, 1]].astype(complex)


@pytest.fixture(scope="session")
def pauli():
    return close_group([X, Z])


@pytest.fixture(scope="session")
def s3():
    return close_group([CYCLE3, SWAP3])


@pytest.fixture(scope="session")
def diag2():
    return close_group([Z])


@pytest.fixture(scope="session")
def trivial2():
    return close_group([np.eye(2)])


@pytest.fixture(scope="session")
def sign2():
    return close_group([-np.eye(2)])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
