"""Central-difference operators on 2D scalar fields.

Fields are plain ``float64`` arrays of shape ``(height, width)``; axis 1 is
``x1`` (columns, spacing ``dx``) and axis 0 is ``x2`` (rows, spacing ``dy``).
A vector field is a ``(v1, v2)`` tuple of such arrays.

Boundaries default to replicate (zero-flux): out-of-range stencil indices are
clamped to the nearest edge node. ``mode="wrap"`` gives periodic boundaries,
which is only meant for Fourier-mode checks.
"""

import numpy as np

from .errors import DimensionMismatch, DimensionTooSmall

DEFAULT_ETA = 1e-8

_PAD_MODES = {"edge": "edge", "replicate": "edge", "wrap": "wrap"}


def as_field(f, name="field"):
    """Return ``f`` as a float64 2D array, checking the minimum grid size."""
    a = np.asarray(f, dtype=np.float64)
    if a.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2D, got shape {a.shape}")
    if a.shape[0] < 3 or a.shape[1] < 3:
        raise DimensionTooSmall(f"{name} must be at least 3x3, got {a.shape}")
    return a


def _pad(f, mode):
    try:
        return np.pad(f, 1, mode=_PAD_MODES[mode])
    except KeyError:
        raise ValueError(f"unknown boundary mode {mode!r}") from None


def gradient(f, dx=1.0, dy=1.0, mode="edge"):
    """Central-difference gradient ``(df/dx1, df/dx2)``."""
    f = as_field(f)
    p = _pad(f, mode)
    gx = (p[1:-1, 2:] - p[1:-1, :-2]) / (2.0 * dx)
    gy = (p[2:, 1:-1] - p[:-2, 1:-1]) / (2.0 * dy)
    return gx, gy


def gradient_magnitude(f, eta=0.0, dx=1.0, dy=1.0, mode="edge"):
    """``sqrt(fx**2 + fy**2 + eta**2)``; ``eta=0`` gives the plain magnitude."""
    if eta < 0:
        raise ValueError("eta must be non-negative")
    gx, gy = gradient(f, dx, dy, mode)
    return np.sqrt(gx * gx + gy * gy + eta * eta)


def laplacian(f, dx=1.0, dy=1.0, mode="edge"):
    """Five-point Laplacian."""
    f = as_field(f)
    p = _pad(f, mode)
    c = p[1:-1, 1:-1]
    lx = (p[1:-1, 2:] + p[1:-1, :-2] - 2.0 * c) / (dx * dx)
    ly = (p[2:, 1:-1] + p[:-2, 1:-1] - 2.0 * c) / (dy * dy)
    return lx + ly


def divergence(v, dx=1.0, dy=1.0, mode="edge"):
    """Central-difference divergence of a vector field ``(v1, v2)``."""
    v1, v2 = (as_field(c, "vector component") for c in v)
    if v1.shape != v2.shape:
        raise DimensionMismatch(f"component shapes differ: {v1.shape} vs {v2.shape}")
    p1 = _pad(v1, mode)
    p2 = _pad(v2, mode)
    return (p1[1:-1, 2:] - p1[1:-1, :-2]) / (2.0 * dx) + (p2[2:, 1:-1] - p2[:-2, 1:-1]) / (2.0 * dy)


def normalized_gradient(f, eta=DEFAULT_ETA, dx=1.0, dy=1.0, mode="edge"):
    gx, gy = gradient(f, dx, dy, mode)
    mag = np.sqrt(gx * gx + gy * gy + eta * eta)
    return gx / mag, gy / mag


def curvature(f, eta=DEFAULT_ETA, dx=1.0, dy=1.0, mode="edge"):
    """Level-line curvature ``div(grad f / |grad f|)``.

    ``eta`` must be positive; it keeps the normalisation finite where the
    gradient vanishes.
    """
    if not eta > 0:
        raise ValueError("curvature needs eta > 0")
    return divergence(normalized_gradient(f, eta, dx, dy, mode), dx, dy, mode)
