import numpy as np
import pytest
from hypothesis import settings, HealthCheck

settings.register_profile(
    "ci",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def standard_structure():
    from g2lab.g2core import standard_structure
    return standard_structure()


@pytest.fixture(scope="session")
def standard_fibration():
    from g2lab.fibration import FibrationSpec, build_fibration
    return build_fibration(FibrationSpec.standard())


@pytest.fixture(scope="session")
def cs_context(standard_fibration):
    from g2lab.chernsimons import CSContext
    return CSContext(standard_fibration, standard_fibration.g2)


def su2(g):
    return np.array([[1j * g[0], g[1] + 1j * g[2]],
                     [-g[1] + 1j * g[2], -1j * g[0]]])
