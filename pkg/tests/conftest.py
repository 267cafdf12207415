import numpy as np
import pytest

from toposq import build_poset, generate_context


@pytest.fixture
def rng():
    return np.random.RandomState(20240811)


@pytest.fixture(scope="session")
def sz():
    return np.diag([1.0, -1.0]).astype(complex)


@pytest.fixture(scope="session")
def sx():
    return np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


@pytest.fixture(scope="session")
def vz(sz):
    return generate_context([sz])


@pytest.fixture(scope="session")
def vx(sx):
    return generate_context([sx])


@pytest.fixture(scope="session")
def zx_poset(vz, vx):
    return build_poset([vz, vx])
