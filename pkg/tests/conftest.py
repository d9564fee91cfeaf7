import pytest

from src.channel import FieldIntensities, new_cavity_channel, static_channel_from_transmittance
from src.core.config import get_settings


@pytest.fixture(autouse=True)
def fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def cavity_low():
    """Cavity channel k=0.4, kappa=5, Omega=10 at sigma_w^2=0.2."""
    return new_cavity_channel(0.4, 5.0, 10.0, FieldIntensities(0.1, 0.2))


@pytest.fixture
def cavity_high():
    return new_cavity_channel(0.4, 5.0, 10.0, FieldIntensities(0.1, 4.0))


@pytest.fixture
def static_low():
    """Beam splitter eta=0.7 below the threshold."""
    return static_channel_from_transmittance(0.7, 0.0, FieldIntensities(0.1, 0.2))


@pytest.fixture
def static_high():
    return static_channel_from_transmittance(0.7, 0.0, FieldIntensities(0.1, 4.0))
