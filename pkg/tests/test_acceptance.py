"""Acceptance suite: each test prints one PASS/FAIL line for its criterion.

Run with ``pytest tests/test_acceptance.py -v`` (lines are printed even
without ``-s``).
"""

import math
import os
import subprocess
import sys
import time

import numpy as np
import pytest
from scipy.ndimage import binary_erosion

from rdlse.experiments import RunSpec, benchmark_rows, summarize
from rdlse.field import divergence, gradient, gradient_magnitude, laplacian
from rdlse.forces import GAC, ChanVese, Constant, Curvature, Dirac, PdeBased, Variational, edge_indicator
from rdlse.metrics import estimate_radius, jaccard, partition_jaccard, region_constancy
from rdlse.regularize import Gdrlse, RdDiffusion, Unregularized, diffusion_step, reinitialize
from rdlse.solver import EvolutionConfig, binary_init, evolve, gdrlse_step, sdf_circle, tssm_step
from rdlse.synth import (Disk, MultiObject, Rect, ThreeRegion, WeakBoundaryDisk, add_gaussian_noise,
                         region_masks, render)

NEVER = 10**9  # stop_check_every value that disables the stationarity test
HERE = os.path.dirname(os.path.abspath(__file__))


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}")
        assert ok, detail
    return emit


def checkerboard(n=16):
    j, i = np.mgrid[0:n, 0:n]
    return np.where((i + j) % 2 == 0, 1.0, -1.0)


def test_criterion_01_stability_bound(report):
    start = time.perf_counter()
    board = checkerboard()
    core = (slice(1, -1), slice(1, -1))
    errs = []
    for dt2 in (0.05, 0.1, 0.2):
        ratio = diffusion_step(board, dt2)[core] / board[core]
        errs.append(np.abs(ratio - (1 - 8 * dt2)).max())
    growth = diffusion_step(board, 0.3, unsafe=True)[core] / board[core]
    growth_err = np.abs(np.abs(growth) - 1.4).max()
    elapsed = time.perf_counter() - start
    ok = max(errs) <= 1e-6 and growth_err <= 1e-6 and elapsed < 1
    report(1, ok, f"max factor error {max(errs):.1e}, |factor| at dt2=0.3 off 1.4 by {growth_err:.1e}, "
                  f"{elapsed:.3f}s")


def test_criterion_02_shrinking_circle(report):
    start = time.perf_counter()
    phi0 = sdf_circle(100, 100, 50, 50, 30)  # positive outside the circle
    peak0 = np.abs(phi0).max()
    rd = EvolutionConfig(dt1=0.1, regularizer=RdDiffusion(0.1), max_iters=100,
                         stop_check_every=NEVER, snapshot_every=1)
    res = evolve(phi0, Constant(1.0), None, rd)
    radius = estimate_radius(res.final_phi < 0)
    rd_peak = max(np.abs(p).max() for _, p in res.snapshots) / peak0

    bare = EvolutionConfig(dt1=0.1, regularizer=Unregularized(), max_iters=200,
                           stop_check_every=NEVER, snapshot_every=1)
    none = evolve(phi0, Constant(1.0), None, bare)
    spike_at = next((n for n, p in none.snapshots if gradient_magnitude(p)[40:61, 40:61].max() > 3), None)
    blowup_at = next((n for n, p in none.snapshots if np.abs(p).max() > 1.5 * peak0), None)
    elapsed = time.perf_counter() - start
    ok = (abs(radius - 20) <= 1.5 and rd_peak <= 1.5 and spike_at is not None
          and blowup_at is not None and elapsed < 5)
    report(2, ok, f"radius after 100 = {radius:.2f}, RD max|phi| ratio {rd_peak:.3f}, "
                  f"unregularized spike (|grad|>3) at iter {spike_at}, >1.5x max at iter {blowup_at}, "
                  f"{elapsed:.2f}s")


def test_criterion_03_mean_curvature_flow(report):
    start = time.perf_counter()
    cfg = EvolutionConfig(dt1=0.1, regularizer=RdDiffusion(0.001), max_iters=4000,
                          stop_check_every=NEVER, snapshot_every=50)
    res = evolve(sdf_circle(100, 100, 50, 50, 30), Curvature(), None, cfg)
    worst = 0.0
    checked = 0
    for n, phi in res.snapshots:
        want = math.sqrt(900 - 2 * 0.1 * n)
        if want < 10:
            break
        worst = max(worst, abs(estimate_radius(phi < 0) - want))
        checked += 1
    elapsed = time.perf_counter() - start
    ok = worst <= 2 and checked >= 80 and elapsed < 10
    report(3, ok, f"worst radius deviation {worst:.2f} cells over {checked} snapshots down to r=10 "
                  f"(dt2=0.001), {elapsed:.2f}s")


def test_criterion_04_piecewise_constant(report):
    start = time.perf_counter()
    spec = ThreeRegion()
    image, truth = render(spec)
    model = GAC(edge_indicator(image, 1.5), nu=-0.5)
    # Edge-driven fronts creep a node per few dozen iterations near weak edges,
    # so stationarity is judged over 100-iteration windows.
    cfg = EvolutionConfig(dt1=0.1, regularizer=RdDiffusion(0.001), max_iters=5000,
                          stop_check_every=100, stop_tol=0.0)
    phi0 = sdf_circle(100, 100, 49.5, 49.5, 45, inside_positive=True)
    res = evolve(phi0, model, image, cfg)
    js = jaccard(res.inside_mask, truth)
    # Compare region interiors: the 3-cell transition layer at each edge is excluded.
    cores = [binary_erosion(r, iterations=3) for r in region_masks(spec)]
    stds = region_constancy(res.final_phi, cores)
    means = [res.final_phi[c].mean() for c in cores]
    gap = max(abs(a - b) for a in means for b in means)
    ratio = max(stds) / gap
    elapsed = time.perf_counter() - start
    ok = res.converged and ratio <= 0.05 and elapsed < 30
    report(4, ok, f"converged={res.converged} at iter {res.iterations_run} (JS to object {js:.4f}); region means "
                  f"{', '.join(f'{m:.2f}' for m in means)}; max std / max gap = {ratio:.4f}, {elapsed:.1f}s")


def test_criterion_05_reinitialization(report):
    start = time.perf_counter()
    sdf = sdf_circle(100, 100, 49.3, 50.6, 30, inside_positive=True)
    out = reinitialize(3 * sdf, steps=200, dt=0.1, s_variant="original")
    band = np.abs(sdf) <= 5
    err = np.abs(gradient_magnitude(out)[band] - 1).max()
    flipped = (out >= 0) != (sdf >= 0)
    shift = np.abs(sdf[flipped]).max() if flipped.any() else 0.0
    elapsed = time.perf_counter() - start
    ok = err <= 0.1 and shift <= 1 and elapsed < 5
    report(5, ok, f"max ||grad phi|-1| in 5-cell band = {err:.3f}, {int(flipped.sum())} nodes changed side, "
                  f"all within {shift:.2f} cells of the old front, {elapsed:.2f}s")


def test_criterion_06_cv_noise_robustness(report):
    start = time.perf_counter()
    spec = RunSpec(command="benchmark", input="synthetic:two_region_disk", in_val=120, out_val=80,
                   methods=["rd", "gdrlse3"], noise_sigmas=[0.0, 0.01, 0.05], seeds=list(range(20)),
                   dt2=0.01, init_cx=40, init_cy=45, init_r=12, max_iters=1000)
    rows = benchmark_rows(spec.validate())
    means = {(r["method"], r["sigma"]): r["js"] for r in summarize(rows)}
    failures = [r for r in rows if r["error"]]
    elapsed = time.perf_counter() - start
    ok = (not failures and means["rd", 0.0] >= 0.95 and means["rd", 0.01] >= 0.95
          and means["rd", 0.05] >= 0.90 and means["rd", 0.05] >= means["gdrlse3", 0.05] and elapsed < 180)
    table = "; ".join(f"{m} s={s}: {v:.4f}" for (m, s), v in means.items())
    report(6, ok, f"mean JS over 20 seeds: {table}; {elapsed:.1f}s")


def test_criterion_07_initialization_robustness(report):
    start = time.perf_counter()
    shapes = (Disk(28, 30, 12, 170), Rect(55, 18, 82, 42, 170), Disk(62, 70, 16, 170), Rect(15, 62, 32, 85, 170))
    clean, truth = render(MultiObject(100, 100, shapes, background=70))
    image = add_gaussian_noise(clean, 0.05, seed=7)
    inits = {
        "outside": Disk(90, 90, 6).mask(100, 100),
        "around": Disk(49.5, 49.5, 47).mask(100, 100),
        "crossing": Rect(20, 20, 60, 60).mask(100, 100),
        "inside": Disk(62, 70, 6).mask(100, 100),
    }
    cfg = EvolutionConfig(dt1=0.1, regularizer=RdDiffusion(0.1), formulation=Variational(Dirac("global", 1.0)),
                          max_iters=1000)
    masks = {k: evolve(binary_init(m), ChanVese(mu=0.001 * 255**2), image, cfg).inside_mask
             for k, m in inits.items()}
    names = list(masks)
    pairs = [partition_jaccard(masks[a], masks[b]) for i, a in enumerate(names) for b in names[i + 1:]]
    to_truth = [partition_jaccard(truth, m) for m in masks.values()]
    elapsed = time.perf_counter() - start
    ok = min(pairs) >= 0.95 and elapsed < 60
    report(7, ok, f"min pairwise JS {min(pairs):.4f} (label-invariant), JS to truth "
                  f"{min(to_truth):.4f}..{max(to_truth):.4f}, {elapsed:.1f}s")


def test_criterion_08_anti_leakage(report):
    start = time.perf_counter()
    clean, truth = render(WeakBoundaryDisk(100, 100, 25, 160, 80))
    image = add_gaussian_noise(clean, 0.01, seed=0)
    model = GAC(edge_indicator(image, 1.5), nu=-0.5)
    phi0 = binary_init(Disk(49.5, 49.5, 40).mask(100, 100))
    js = {}
    for name, reg in (("rd", RdDiffusion(0.001)), ("gdrlse2", Gdrlse("r2", 0.2)), ("gdrlse3", Gdrlse("r3", 0.2, 0.5))):
        cfg = EvolutionConfig(dt1=0.1, regularizer=reg, formulation=PdeBased(), max_iters=5000,
                              stop_check_every=100)
        js[name] = jaccard(evolve(phi0, model, image, cfg).inside_mask, truth)
    elapsed = time.perf_counter() - start
    ok = js["rd"] >= 0.85 and js["rd"] > js["gdrlse2"] and js["rd"] > js["gdrlse3"] and elapsed < 60
    report(8, ok, f"JS rd={js['rd']:.4f} gdrlse2={js['gdrlse2']:.4f} gdrlse3={js['gdrlse3']:.4f} (seed 0), "
                  f"{elapsed:.1f}s")


PROPERTY_TESTS = [
    "test_field.py::test_gradient_is_linear",
    "test_field.py::test_laplacian_equals_div_grad_for_quadratics",
    "test_field.py::test_laplacian_and_div_grad_agree_to_second_order",
    "test_field.py::test_operators_keep_finite",
    "test_field.py::test_curvature_zero_for_parallel_lines",
    "test_forces.py::test_dirac_normalization",
    "test_forces.py::test_diracs_even_and_nonnegative",
    "test_forces.py::test_heaviside_strictly_increasing",
    "test_forces.py::test_heaviside_derivative_is_global_dirac",
    "test_forces.py::test_gac_with_unit_edge_map_is_curvature",
    "test_forces.py::test_cv_means_sharpen_with_scale",
    "test_regularize.py::test_maximum_principle",
    "test_regularize.py::test_mass_conservation",
    "test_regularize.py::test_fourier_mode_periodic",
    "test_regularize.py::test_original_sign_preserved",
    "test_regularize.py::test_reg_term_constant",
    "test_solver.py::test_determinism",
    "test_solver.py::test_radius_law_constant_force",
    "test_solver.py::test_radius_law_curvature_early",
    "test_solver.py::test_cv_complementary_on_sign_swap",
    "test_synth_metrics.py::test_jaccard_axioms",
    "test_synth_metrics.py::test_render_deterministic",
    "test_synth_metrics.py::test_noise_identity_and_determinism",
    "test_synth_metrics.py::test_noise_statistics",
    "test_synth_metrics.py::test_estimate_radius_recovers_disk",
    "test_cli.py::test_exit_codes",
    "test_cli.py::test_dump_config_roundtrip",
    "test_cli.py::test_benchmark_rows_and_determinism",
]


def test_criterion_09_property_suites(report):
    ids = [os.path.join(HERE, t) for t in PROPERTY_TESTS]
    proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", *ids],
                          capture_output=True, text=True, cwd=HERE)
    tail = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-200:]
    report(9, proc.returncode == 0, f"{len(PROPERTY_TESTS)} property tests: {tail}")


@pytest.mark.xfail(strict=True, reason="central-difference div(grad f) is the 2h-wide Laplacian stencil; "
                                       "it matches the compact 5-point Laplacian only for cubic and lower "
                                       "polynomials, so the 1e-12 identity cannot hold for generic smooth f")
def test_criterion_09_laplacian_identity_literal(report):
    y, x = np.mgrid[0:40, 0:40].astype(float)
    rng = np.random.default_rng(0)
    f = sum(rng.normal() * np.sin(rng.uniform(0.05, 0.3) * x + rng.uniform(0.05, 0.3) * y + rng.uniform(0, 6))
            for _ in range(4))
    diff = np.abs(laplacian(f) - divergence(gradient(f)))[2:-2, 2:-2].max()
    report("9 (laplacian = div grad to 1e-12, random smooth f)", diff <= 1e-12,
           f"max |laplacian - div grad| = {diff:.2e} at nodes >= 2 from the boundary")


def test_criterion_10_iteration_cost(report):
    clean, _ = render(WeakBoundaryDisk(100, 100, 25, 160, 80))
    image = add_gaussian_noise(clean, 0.05, seed=1)
    phi = binary_init(Disk(45, 52, 20).mask(100, 100))
    form = Variational(Dirac("global", 1.0))
    rd = EvolutionConfig(regularizer=RdDiffusion(0.1), formulation=form)
    gd = EvolutionConfig(regularizer=Gdrlse("r2", 0.2), formulation=form)
    model = ChanVese()

    def best(step, cfg, reps=5, n=40):
        times = []
        for _ in range(reps):
            t = time.perf_counter()
            for _ in range(n):
                step(phi, model, image, cfg)
            times.append((time.perf_counter() - t) / n)
        return min(times)

    t_rd, t_gd = best(tssm_step, rd), best(gdrlse_step, gd)
    ratio = t_rd / t_gd
    report(10, 0.5 <= ratio <= 2, f"per-iteration time rd {t_rd * 1e3:.3f} ms vs gdrlse {t_gd * 1e3:.3f} ms "
                                  f"(ratio {ratio:.2f}, required within 2x)")
