"""
Leaking through a weak edge
===========================

The disk's edge is blurred over a quarter of its circumference, so the
edge indicator barely stops the contour there.  A contour shrinking under
a geodesic force tends to squeeze through that gap.  The distance
regularizers make it worse, because they keep the front moving at full
speed.
"""

from rdlse.forces import GAC, PdeBased, edge_indicator
from rdlse.metrics import jaccard
from rdlse.regularize import Gdrlse, RdDiffusion
from rdlse.solver import EvolutionConfig, binary_init, evolve
from rdlse.synth import Disk, WeakBoundaryDisk, add_gaussian_noise, render

clean, truth = render(WeakBoundaryDisk(100, 100, 25, in_val=160, out_val=80))
phi0 = binary_init(Disk(49.5, 49.5, 40).mask(100, 100))
methods = {"rd": RdDiffusion(0.001), "gdrlse2": Gdrlse("r2"), "gdrlse3": Gdrlse("r3", rho3=0.5)}

for seed in range(3):
    image = add_gaussian_noise(clean, 0.01, seed)
    model = GAC(edge_indicator(image), nu=-0.5)
    scores = []
    for name, reg in methods.items():
        cfg = EvolutionConfig(dt1=0.1, regularizer=reg, formulation=PdeBased(), max_iters=5000, stop_check_every=100)
        scores.append(f"{name} {jaccard(evolve(phi0, model, image, cfg).inside_mask, truth):.3f}")
    print(f"seed {seed}: " + ", ".join(scores))
