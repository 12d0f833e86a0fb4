import numpy as np
import pytest

from eddybie import geometry


@pytest.fixture(scope="session")
def sphere_mesh():
    return geometry.default_mesh("sphere")


@pytest.fixture(scope="session")
def torus_mesh():
    return geometry.default_mesh("torus")


@pytest.fixture(scope="session")
def starfish_torus_mesh():
    return geometry.default_mesh("starfish-torus")


@pytest.fixture(scope="session")
def rotated_starfish_mesh():
    return geometry.default_mesh("rotated-starfish")


@pytest.fixture()
def rng():
    return np.random.default_rng(7)
