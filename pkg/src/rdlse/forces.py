"""Force terms, smoothed Dirac/Heaviside functions and the reaction term.

Sign convention: the level set function is positive inside the contour and
negative outside. Images are kept on the 0..255 intensity scale.
"""

import math
from dataclasses import dataclass, field
from typing import Literal, Union

import numpy as np
from scipy import ndimage

from .errors import DegenerateRegion
from .field import DEFAULT_ETA, as_field, curvature, divergence, gradient, gradient_magnitude, normalized_gradient


def dirac_compact(z, rho=1.0):
    """Raised-cosine Dirac approximation, supported on ``|z| <= rho``."""
    if not rho > 0:
        raise ValueError("rho must be positive")
    z = np.asarray(z, dtype=np.float64)
    out = np.where(np.abs(z) <= rho, (1.0 + np.cos(np.pi * z / rho)) / (2.0 * rho), 0.0)
    return out if out.ndim else float(out)


def dirac_global(z, rho=1.0):
    """Cauchy-profile Dirac approximation, nonzero on every level."""
    if not rho > 0:
        raise ValueError("rho must be positive")
    z = np.asarray(z, dtype=np.float64)
    out = rho / (np.pi * (rho * rho + z * z))
    return out if out.ndim else float(out)


def heaviside_reg(z, rho=1.0):
    """Arctan-smoothed Heaviside; its derivative is :func:`dirac_global`."""
    if not rho > 0:
        raise ValueError("rho must be positive")
    z = np.asarray(z, dtype=np.float64)
    out = 0.5 * (1.0 + (2.0 / np.pi) * np.arctan(z / rho))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class Dirac:
    """A Dirac approximation choice: ``"compact"`` or ``"global"``, width ``rho``."""

    kind: Literal["compact", "global"] = "global"
    rho: float = 1.0

    def __post_init__(self):
        if self.kind not in ("compact", "global"):
            raise ValueError(f"unknown Dirac kind {self.kind!r}")
        if not self.rho > 0:
            raise ValueError("rho must be positive")

    def __call__(self, z):
        if self.kind == "compact":
            return dirac_compact(z, self.rho)
        return dirac_global(z, self.rho)


@dataclass(frozen=True)
class PdeBased:
    """Geometric formulation: the force acts through ``|grad phi|``."""


@dataclass(frozen=True)
class Variational:
    """Energy-gradient formulation: the force acts through ``delta(phi)``."""

    dirac: Dirac = field(default_factory=Dirac)


Formulation = Union[PdeBased, Variational]


def gaussian_smooth(image, sigma):
    """Separable Gaussian blur, kernel radius ``ceil(3*sigma)``, replicate edges."""
    image = np.asarray(image, dtype=np.float64)
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    if sigma == 0:
        return image.copy()
    return ndimage.gaussian_filter(image, sigma, mode="nearest", radius=int(math.ceil(3 * sigma)))


def edge_indicator(image, sigma=1.5, dx=1.0, dy=1.0):
    """``g = 1 / (1 + |grad(G_sigma * I)|**2)``, in ``(0, 1]``."""
    smooth = gaussian_smooth(as_field(image, "image"), sigma)
    gx, gy = gradient(smooth, dx, dy)
    return 1.0 / (1.0 + gx * gx + gy * gy)


def cv_region_means(image, phi, rho=1.0):
    """Heaviside-weighted mean intensity inside (``phi > 0``) and outside."""
    image = np.asarray(image, dtype=np.float64)
    h = heaviside_reg(phi, rho)
    w_in = h.sum()
    w_out = (1.0 - h).sum()
    if w_in < 1e-12 or w_out < 1e-12:
        raise DegenerateRegion("level set puts the whole domain on one side")
    return float((image * h).sum() / w_in), float((image * (1.0 - h)).sum() / w_out)


# Force models --------------------------------------------------------------

@dataclass(frozen=True)
class Constant:
    c: float = 1.0


@dataclass(frozen=True)
class Curvature:
    pass


@dataclass(frozen=True, eq=False)
class EdgeVariational:
    """``lam * div(g grad(phi)/|grad(phi)|) + nu * g`` with a precomputed edge map ``g``."""

    g: np.ndarray
    lam: float = 1.0
    nu: float = 0.05

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("lam must be positive")


@dataclass(frozen=True, eq=False)
class GAC:
    """Geodesic active contour force ``div(g grad(phi)/|grad(phi)|) + nu * g``."""

    g: np.ndarray
    nu: float = 0.5


@dataclass(frozen=True)
class ChanVese:
    """Two-phase piecewise-constant region force.

    ``rho`` is the width of the smoothed Heaviside used for the region
    means; it should match the Dirac width of the formulation.
    """

    mu: float = 0.1 * 255.0**2
    nu: float = 0.0
    lambda1: float = 1.0
    lambda2: float = 1.0
    rho: float = 1.0

    def __post_init__(self):
        if self.mu < 0 or self.nu < 0:
            raise ValueError("mu and nu must be non-negative")
        if not (self.lambda1 > 0 and self.lambda2 > 0):
            raise ValueError("lambda1 and lambda2 must be positive")


ForceModel = Union[Constant, Curvature, EdgeVariational, GAC, ChanVese]


def _geodesic_term(g, phi, eta, dx, dy):
    nx, ny = normalized_gradient(phi, eta, dx, dy)
    return divergence((g * nx, g * ny), dx, dy)


def force_field(model, phi, image=None, eta=DEFAULT_ETA, dx=1.0, dy=1.0):
    """Evaluate the pointwise force ``F`` of ``model`` for the current ``phi``."""
    phi = as_field(phi, "phi")
    if isinstance(model, Constant):
        return np.full_like(phi, float(model.c))
    if isinstance(model, Curvature):
        return curvature(phi, eta, dx, dy)
    if isinstance(model, EdgeVariational):
        return model.lam * _geodesic_term(model.g, phi, eta, dx, dy) + model.nu * model.g
    if isinstance(model, GAC):
        return _geodesic_term(model.g, phi, eta, dx, dy) + model.nu * model.g
    if isinstance(model, ChanVese):
        if image is None:
            raise ValueError("ChanVese needs the image")
        image = np.asarray(image, dtype=np.float64)
        c_in, c_out = cv_region_means(image, phi, model.rho)
        f = -model.lambda1 * (image - c_in) ** 2 + model.lambda2 * (image - c_out) ** 2 - model.nu
        if model.mu:
            f += model.mu * curvature(phi, eta, dx, dy)
        return f
    raise TypeError(f"unknown force model {model!r}")


def reaction_term(formulation, force, phi, dx=1.0, dy=1.0):
    """``L(phi)``: ``-F |grad phi|`` (PDE-based) or ``-F delta(phi)`` (variational)."""
    if isinstance(formulation, PdeBased):
        return -force * gradient_magnitude(phi, 0.0, dx, dy)
    if isinstance(formulation, Variational):
        return -force * formulation.dirac(phi)
    raise TypeError(f"unknown formulation {formulation!r}")
