import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "confocal",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("confocal")


@pytest.fixture
def rng():
    return np.random.default_rng(0)
