import numpy as np
import pytest

from sobolev_kernels.oracle import QuadratureSpec


@pytest.fixture(scope="session")
def spec():
    return QuadratureSpec()


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


def sample_points(rng, m, d, min_sep=1e-3):
    """Uniform points in [0, 2 m^{1/d}]^d with a minimum pairwise separation."""
    from sobolev_kernels.rkhs import PointSet

    side = 2.0 * m ** (1.0 / d)
    while True:
        pts = rng.uniform(0.0, side, size=(m, d))
        if PointSet(pts).min_separation() >= min_sep:
            return pts


@pytest.fixture
def random_points(rng):
    return lambda m, d, min_sep=1e-3: sample_points(rng, m, d, min_sep)
