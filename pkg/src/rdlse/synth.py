"""Synthetic test images with exact ground truth, plus noise injection."""

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np

from .forces import gaussian_smooth


def _grid(width, height):
    y, x = np.mgrid[0:height, 0:width]
    return x.astype(np.float64), y.astype(np.float64)


def _center(width, height, center):
    if center is None:
        return (width - 1) / 2.0, (height - 1) / 2.0
    return center


def _check_value(v):
    if not 0 <= v <= 255:
        raise ValueError(f"intensity {v} outside [0, 255]")


@dataclass(frozen=True)
class Disk:
    cx: float
    cy: float
    radius: float
    value: float = 200.0

    def mask(self, width, height):
        x, y = _grid(width, height)
        return np.hypot(x - self.cx, y - self.cy) <= self.radius


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle covering columns ``x0..x1`` and rows ``y0..y1`` inclusive."""

    x0: int
    y0: int
    x1: int
    y1: int
    value: float = 200.0

    def mask(self, width, height):
        x, y = _grid(width, height)
        return (x >= self.x0) & (x <= self.x1) & (y >= self.y0) & (y <= self.y1)


@dataclass(frozen=True)
class TwoRegionDisk:
    width: int = 96
    height: int = 101
    radius: float = 20.0
    in_val: float = 200.0
    out_val: float = 50.0
    center: Optional[Tuple[float, float]] = None


@dataclass(frozen=True)
class MultiObject:
    width: int = 100
    height: int = 100
    shapes: tuple = ()
    background: float = 50.0


@dataclass(frozen=True)
class WeakBoundaryDisk:
    """Disk whose edge is Gaussian-blurred only inside the angular range ``gap_arc``.

    Angles are in radians, measured from the +x1 axis toward +x2 (image rows).
    """

    width: int = 100
    height: int = 100
    radius: float = 25.0
    in_val: float = 120.0
    out_val: float = 80.0
    gap_arc: Tuple[float, float] = (-np.pi / 4, np.pi / 4)
    blur_sigma: float = 4.0
    center: Optional[Tuple[float, float]] = None


@dataclass(frozen=True)
class ThreeRegion:
    """Background A, an object B and a region C nested inside B (an interior boundary)."""

    width: int = 100
    height: int = 100
    b_shape: Rect = field(default_factory=lambda: Rect(20, 20, 79, 79))
    c_shape: Disk = field(default_factory=lambda: Disk(49.5, 49.5, 14.0))
    a_val: float = 220.0
    b_val: float = 40.0
    c_val: float = 130.0


SyntheticSpec = Union[TwoRegionDisk, MultiObject, WeakBoundaryDisk, ThreeRegion]


def _disk_image(width, height, radius, in_val, out_val, center):
    cx, cy = _center(width, height, center)
    mask = Disk(cx, cy, radius).mask(width, height)
    return np.where(mask, float(in_val), float(out_val)), mask


def render(spec):
    """Return ``(image, truth)`` for a synthetic spec.

    ``truth`` is the object mask: the disk, the union of all shapes, or for
    :class:`ThreeRegion` the object B including its nested region C.
    """
    if isinstance(spec, TwoRegionDisk):
        for v in (spec.in_val, spec.out_val):
            _check_value(v)
        return _disk_image(spec.width, spec.height, spec.radius, spec.in_val, spec.out_val, spec.center)

    if isinstance(spec, WeakBoundaryDisk):
        for v in (spec.in_val, spec.out_val):
            _check_value(v)
        image, mask = _disk_image(spec.width, spec.height, spec.radius, spec.in_val, spec.out_val, spec.center)
        if spec.blur_sigma > 0:
            cx, cy = _center(spec.width, spec.height, spec.center)
            x, y = _grid(spec.width, spec.height)
            start, stop = spec.gap_arc
            theta = np.arctan2(y - cy, x - cx)
            in_arc = np.mod(theta - start, 2 * np.pi) <= np.mod(stop - start, 2 * np.pi)
            image = np.where(in_arc, gaussian_smooth(image, spec.blur_sigma), image)
        return image, mask

    if isinstance(spec, MultiObject):
        _check_value(spec.background)
        image = np.full((spec.height, spec.width), float(spec.background))
        truth = np.zeros((spec.height, spec.width), dtype=bool)
        for shape in spec.shapes:
            _check_value(shape.value)
            m = shape.mask(spec.width, spec.height)
            image[m] = shape.value
            truth |= m
        return image, truth

    if isinstance(spec, ThreeRegion):
        a, b, c = region_masks(spec)
        for v in (spec.a_val, spec.b_val, spec.c_val):
            _check_value(v)
        image = np.select([a, b, c], [spec.a_val, spec.b_val, spec.c_val]).astype(np.float64)
        return image, b | c

    raise TypeError(f"unknown synthetic spec {spec!r}")


def region_masks(spec):
    """Disjoint masks ``[A, B, C]`` of a :class:`ThreeRegion` layout."""
    outer = spec.b_shape.mask(spec.width, spec.height)
    c = spec.c_shape.mask(spec.width, spec.height) & outer
    return [~outer, outer & ~c, c]


def add_gaussian_noise(image, sigma, seed=0):
    """Add ``N(0, sigma)`` noise on the [0, 1] intensity scale, clip, rescale to 0..255."""
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    image = np.asarray(image, dtype=np.float64)
    if sigma == 0:
        return image.copy()
    rng = np.random.default_rng(seed)
    noisy = image / 255.0 + rng.normal(0.0, sigma, size=image.shape)
    return np.clip(noisy, 0.0, 1.0) * 255.0
