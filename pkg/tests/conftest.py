import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from olb.geometry import Oval

settings.register_profile(
    "olb", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("olb")


@pytest.fixture
def unit_circle():
    return Oval.circle(1.0)


@pytest.fixture
def ellipse():
    return Oval.ellipse(2.0, 1.0)


@pytest.fixture
def lp_table():
    return Oval.lp(1.5)


@pytest.fixture
def fourier_table():
    return Oval.fourier(3.0, a2=0.2, b3=0.1)


@pytest.fixture(params=["ellipse", "lp", "fourier"])
def table(request):
    return {
        "ellipse": Oval.ellipse(2.0, 1.0),
        "lp": Oval.lp(1.5),
        "fourier": Oval.fourier(3.0, a2=0.2, b3=0.1),
    }[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def exterior_points(oval, rng, n, lo=1.5, hi=6.0):
    """Random points at ``lo..hi`` diameters from the origin."""
    t = rng.uniform(0, 2 * np.pi, n)
    r = oval.diameter * rng.uniform(lo, hi, n)
    return np.asarray(oval.origin) + r[:, None] * np.column_stack([np.cos(t), np.sin(t)])
