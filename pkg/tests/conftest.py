import os

import pytest
from hypothesis import HealthCheck, settings

from vdwcasimir import Lorentz, OscillatorParams
from vdwcasimir.constants import C_LIGHT

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=400)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

W0 = 1.0e16  # reference resonance [rad/s]
LENGTH0 = C_LIGHT / W0  # ~30 nm


@pytest.fixture
def lorentz_unit():
    """Dimensionless-looking Lorentz model: Omega^2 = 1, omega_0 = 1, gamma = 0.1."""
    return Lorentz(1.0, 1.0, 0.1)


@pytest.fixture
def atom():
    """Helium-like atom, static polarizability ~0.6 A^3."""
    return OscillatorParams(253.0, W0, 0.0)
