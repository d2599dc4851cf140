import numpy as np
import pytest

from srtrbm.core import RbmParams


@pytest.fixture
def tiny_params() -> RbmParams:
    """2x2 model with asymmetric couplings, small enough to enumerate."""
    return RbmParams(
        w=np.array([[1.0, -1.0], [0.5, 2.0]]),
        b_v=np.array([0.2, -0.3]),
        b_h=np.array([0.1, 0.4]),
    )


@pytest.fixture
def small_params() -> RbmParams:
    """3+2 model drawn once and pinned, used where 2x2 is too symmetric."""
    rng = np.random.default_rng(2024)
    return RbmParams(
        w=rng.normal(0, 1.0, (3, 2)),
        b_v=rng.normal(0, 0.7, 3),
        b_h=rng.normal(0, 0.7, 2),
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: end-to-end acceptance criteria")
