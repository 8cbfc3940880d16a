import numpy as np
import pytest

from ptspec import build_operator


@pytest.fixture(scope="session")
def op_harmonic():
    """eps=0 validation operator (winding contour, criterion-1 settings)."""
    return build_operator(0.0, 4000, 1e-3)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
