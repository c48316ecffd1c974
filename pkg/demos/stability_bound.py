"""
Why the diffusion step needs dt2 <= 0.25
========================================

The diffusion half of each iteration is an explicit heat-equation step.
Its worst Fourier mode is the checkerboard, which one step multiplies by
``1 - 8 * dt2``.  Past dt2 = 0.25 that factor drops below -1 and the mode
grows without bound.
"""

import math

import numpy as np

from rdlse.errors import StabilityViolation
from rdlse.regularize import amplification_factor, diffusion_step

board = np.where(np.indices((16, 16)).sum(axis=0) % 2 == 0, 1.0, -1.0)

for dt2 in (0.05, 0.1, 0.2, 0.25, 0.3):
    # unsafe=True lets us look past the bound; normally it raises.
    out = diffusion_step(board, dt2, unsafe=True)
    measured = out[8, 8] / board[8, 8]
    predicted = amplification_factor(dt2, math.pi, math.pi)
    print(f"dt2={dt2:<5} measured={measured:+.3f} predicted={predicted:+.3f}")

# Ten steps at dt2 = 0.3 blow the pattern up by 1.4**10 ~ 29x.
phi = board
for _ in range(10):
    phi = diffusion_step(phi, 0.3, unsafe=True)
print("amplitude after 10 unstable steps:", abs(phi[8, 8]))

try:
    diffusion_step(board, 0.3)
except StabilityViolation as exc:
    print("without the override:", exc)
