"""
Re-initialization, the classic alternative
==========================================

The re-initialization baseline periodically solves
phi_t + S(phi0)(|grad phi| - 1) = 0 to restore a signed distance function.
Here a distance function steepened threefold is flattened back, without
moving its zero set by more than a fraction of a cell.
"""

import numpy as np

from rdlse.field import gradient_magnitude
from rdlse.regularize import reinitialize
from rdlse.solver import sdf_circle

sdf = sdf_circle(100, 100, 49.3, 50.6, 30, inside_positive=True)
band = np.abs(sdf) <= 5

for variant in ("original", "modified"):
    phi = 3 * sdf
    for steps in (0, 50, 100, 200):
        out = reinitialize(phi, steps=steps, dt=0.1, s_variant=variant) if steps else phi
        err = np.abs(gradient_magnitude(out)[band] - 1).max()
        moved = ((out >= 0) != (sdf >= 0)).sum()
        print(f"{variant:8s} {steps:3d} steps: max||grad phi|-1| = {err:.3f}, nodes changed side: {moved}")
