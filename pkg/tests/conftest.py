import pytest
from hypothesis import HealthCheck, settings

from forcelab.corpus import antichain, chain, cohen, topped_antichain
from forcelab.forcing import ForcingContext

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def cohen2():
    return cohen(2)


@pytest.fixture(scope="session")
def cohen2_ctx(cohen2):
    return ForcingContext(cohen2)


@pytest.fixture(scope="session")
def small_posets():
    return [cohen(1), cohen(2), antichain(2), antichain(3), chain(2), chain(3), topped_antichain(2)]
