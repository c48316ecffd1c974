import numpy as np
import pytest


@pytest.fixture
def grid21():
    y, x = np.mgrid[0:21, 0:21].astype(float)
    return x, y


def circle_sdf(n, cx, cy, r):
    """Exact signed distance (positive outside), computed independently of the library."""
    y, x = np.mgrid[0:n, 0:n].astype(float)
    return np.sqrt((x - cx) ** 2 + (y - cy) ** 2) - r


def interior(a, k=1):
    return a[k:-k, k:-k]
