"""General configuration for the test suite"""
import logging

import numpy as np
from numpy.random import seed
import pytest

from nvholo.quantum import HilbertSpace, Operator

seed(170817)


@pytest.fixture()
def qubit_space():
    return HilbertSpace(["0", "1"])


@pytest.fixture()
def vsystem_space():
    return HilbertSpace(["0", "1", "e"])


@pytest.fixture()
def pauli(qubit_space):
    """Pauli operators on a qubit"""
    return {
        "x": Operator(qubit_space, [[0, 1], [1, 0]]),
        "y": Operator(qubit_space, [[0, -1j], [1j, 0]]),
        "z": Operator(qubit_space, [[1, 0], [0, -1]]),
    }


@pytest.fixture()
def rng():
    return np.random.default_rng(170817)


@pytest.fixture()
def random_hermitian(rng):
    """Factory for random Hermitian operators with a given spectral norm"""

    def func(space, norm=1.0):
        a = rng.normal(size=(space.dim, space.dim)) + 1j * rng.normal(
            size=(space.dim, space.dim)
        )
        h = a + a.conj().T
        h *= norm / np.linalg.norm(h, 2)
        return Operator(space, h)

    return func


@pytest.fixture()
def random_state(rng):
    """Factory for random normalised amplitudes"""

    def func(dim):
        a = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        return a / np.linalg.norm(a)

    return func


@pytest.fixture(autouse=True)
def reset_logger():
    """Remove handlers added by setup_logger"""
    yield
    logger = logging.getLogger("nvholo")
    for handler in logger.handlers[:]:
        handler.close()
    logger.handlers = []
    logger.setLevel(logging.NOTSET)
    logger.addHandler(logging.NullHandler())
