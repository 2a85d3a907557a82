import numpy as np
import pytest

from texcurve import ControlPolygon, SamplerConfig


IDEAL = SamplerConfig.ideal()
BITS8 = SamplerConfig(subtexel_bits=8)


def random_polygon(rng, degree, channels=1, lo=-1.0, hi=1.0):
    return ControlPolygon(rng.uniform(lo, hi, (degree + 1, channels)))


def random_c0_quadratics(rng, count, channels=1, lo=0.0, hi=1.0):
    """A chain of C0-joined quadratic segments with shared endpoints."""
    pts = rng.uniform(lo, hi, (2 * count + 1, channels))
    return [ControlPolygon(pts[2 * k : 2 * k + 3]) for k in range(count)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
