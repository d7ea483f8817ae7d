import os

import pytest
from hypothesis import HealthCheck, settings

from svarc.model.instances import load_bundled

settings.register_profile(
    "default",
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.register_profile("dev", max_examples=20, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))

DATA_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "svarc", "data")


@pytest.fixture(scope="module")
def parallel_arrows():
    return load_bundled("parallel_arrows_S")


@pytest.fixture(scope="module")
def doblecir():
    return load_bundled("doblecir_covering")


@pytest.fixture(scope="module")
def groupoid():
    return load_bundled("groupoid_to_Z2")


@pytest.fixture(scope="module")
def projective_plane():
    return load_bundled("projective_plane_covering")


@pytest.fixture
def data_file():
    def path(name):
        return os.path.join(DATA_DIR, name)

    return path
