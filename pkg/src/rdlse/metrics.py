"""Segmentation metrics on boolean region masks."""

import math

import numpy as np
from scipy import ndimage

from .errors import DimensionMismatch, EmptyMask


def zero_level_mask(phi):
    """Inside region ``phi >= 0``."""
    return np.asarray(phi) >= 0


def jaccard(a, b):
    """``|a & b| / |a | b|``; two empty masks count as identical (1.0)."""
    a = np.asarray(a, dtype=bool)
    b = np.asarray(b, dtype=bool)
    if a.shape != b.shape:
        raise DimensionMismatch(f"mask shapes differ: {a.shape} vs {b.shape}")
    union = np.count_nonzero(a | b)
    if union == 0:
        return 1.0
    return np.count_nonzero(a & b) / union


def partition_jaccard(a, b):
    """Label-invariant Jaccard: the better of ``jaccard(a, b)`` and ``jaccard(a, ~b)``.

    Two-phase region models may converge to either labelling of the same
    partition, depending on where the initial contour sits.
    """
    b = np.asarray(b, dtype=bool)
    return max(jaccard(a, b), jaccard(a, ~b))


def largest_component(mask):
    """Largest 4-connected component of ``mask``."""
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise EmptyMask("mask has no true nodes")
    labels, n = ndimage.label(mask)
    sizes = np.bincount(labels.ravel())
    sizes[0] = 0
    return labels == int(np.argmax(sizes))


def estimate_radius(mask):
    """Equivalent-disk radius ``sqrt(area / pi)`` of the largest component."""
    return math.sqrt(np.count_nonzero(largest_component(mask)) / math.pi)


def region_constancy(phi, regions):
    """Standard deviation of ``phi`` within each region."""
    phi = np.asarray(phi, dtype=np.float64)
    out = []
    for r in regions:
        r = np.asarray(r, dtype=bool)
        if r.shape != phi.shape:
            raise DimensionMismatch(f"region shape {r.shape} does not match field {phi.shape}")
        if not r.any():
            raise EmptyMask("region has no nodes")
        out.append(float(np.std(phi[r])))
    return out


def mask_boundary(mask):
    """Nodes of ``mask`` with at least one 4-neighbour outside it."""
    mask = np.asarray(mask, dtype=bool)
    p = np.pad(mask, 1, mode="edge")
    interior = p[:-2, 1:-1] & p[2:, 1:-1] & p[1:-1, :-2] & p[1:-1, 2:]
    return mask & ~interior
