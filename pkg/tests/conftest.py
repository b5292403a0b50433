import math

import pytest
from hypothesis import settings

from summax.measures import (Discrete, Frechet, PointMass, StdNormal, SumMaxStableParams,
                             complete_dependence_params, frechet_mix_params, normal_mix_params)

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

K_HALF = 1.0 / math.sqrt(math.pi)  # 1/Gamma(0.5)


@pytest.fixture
def complete_dep():
    return complete_dependence_params(0.5)


@pytest.fixture
def normal_mix():
    return normal_mix_params(0.5)


@pytest.fixture
def frechet_mix():
    return frechet_mix_params(0.5, 2.0, 1.0)


OMEGAS = {
    "point": PointMass(1.5),
    "discrete": Discrete([(-1.0, 0.2), (0.5, 0.3), (2.0, 0.5)]),
    "frechet": Frechet(3.0, 1.5),
    "normal": StdNormal(),
}


def mixed_params(omega, beta=0.5, alpha=1.0, C=0.4, K=1.3):
    return SumMaxStableParams(beta, alpha, C, K, omega)
