"""Experiment orchestration behind the command line.

A :class:`RunSpec` is a flat bag of settings that round-trips through a
``key = value`` text file. Each ``run_*`` function takes a spec, writes its
artifacts into ``spec.output_dir`` and returns a small summary dict.
"""

import dataclasses
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import pgm
from .errors import ConfigError, IoFailure, RdlseError
from .field import gradient_magnitude
from .forces import (GAC, ChanVese, Constant, Curvature, Dirac, EdgeVariational, PdeBased,
                     Variational, edge_indicator)
from .metrics import estimate_radius, jaccard, mask_boundary
from .regularize import (Gdrlse, RdDiffusion, Reinit, Unregularized, amplification_factor,
                         diffusion_step)
from .solver import EvolutionConfig, binary_init, evolve, mask_sdf, sdf_circle
from .synth import (Disk, MultiObject, Rect, ThreeRegion, TwoRegionDisk, WeakBoundaryDisk,
                    add_gaussian_noise, render)

COMMANDS = ("segment", "shrink-demo", "curvature-demo", "stability-demo", "benchmark", "compare")
METHODS = ("rd", "gdrlse1", "gdrlse2", "gdrlse3", "reinit", "none")
MODELS = ("cv", "gac", "edge", "constant", "curvature")


@dataclass
class RunSpec:
    command: str = "segment"
    input: str = "synthetic:two_region_disk"
    truth: str = ""
    # synthetic image geometry
    width: int = 96
    height: int = 101
    radius: float = 20.0
    in_val: float = 200.0
    out_val: float = 50.0
    blur_sigma: float = 4.0
    gap_start: float = -45.0
    gap_end: float = 45.0
    # force model
    model: str = "cv"
    formulation: str = ""
    dirac: str = "global"
    rho: float = 1.0
    c: float = 1.0
    mu: float = 0.1 * 255.0**2
    nu: float = 0.0
    lambda1: float = 1.0
    lambda2: float = 1.0
    lam: float = 1.0
    edge_sigma: float = 1.5
    # evolution
    method: str = "rd"
    methods: list = field(default_factory=lambda: ["rd"])
    dt1: float = 0.1
    dt2: float = 0.1
    substeps: int = 1
    alpha: float = 0.2
    rho3: float = 0.5
    gdrlse3_rho: float = 0.5
    reinit_period: int = 10
    reinit_steps: int = 10
    reinit_dt: float = 0.1
    s_variant: str = "original"
    max_iters: int = 1000
    stop_check_every: int = 20
    stop_tol: float = 1e-4
    snapshot_every: int = 0
    # initial contour; negative centre coordinates mean the grid centre
    init: str = "circle"
    init_cx: float = -1.0
    init_cy: float = -1.0
    init_r: float = 12.0
    init_magnitude: float = 1.0
    # noise and sweep
    noise_sigmas: list = field(default_factory=lambda: [0.0])
    seeds: list = field(default_factory=lambda: [0])
    dt2_values: list = field(default_factory=lambda: [0.05, 0.1, 0.2, 0.25, 0.3])
    output_dir: str = "out"
    workers: int = 1

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}; expected one of {COMMANDS}")
        if self.model not in MODELS:
            raise ConfigError(f"unknown model {self.model!r}; expected one of {MODELS}")
        for m in [self.method, *self.methods]:
            if m not in METHODS:
                raise ConfigError(f"unknown method {m!r}; expected one of {METHODS}")
        if self.formulation not in ("", "pde", "variational"):
            raise ConfigError(f"unknown formulation {self.formulation!r}")
        if self.dirac not in ("global", "compact"):
            raise ConfigError(f"unknown dirac {self.dirac!r}")
        if self.init not in ("circle", "sdf-circle"):
            raise ConfigError(f"unknown init {self.init!r}")
        if not self.seeds or not self.noise_sigmas:
            raise ConfigError("seeds and noise_sigmas must be non-empty")
        return self


# Config text round-trip ------------------------------------------------------

_LIST_ITEM = {"methods": str, "noise_sigmas": float, "seeds": int, "dt2_values": float}
_SCALAR = {int: int, float: float, str: str}


def _field_types():
    return {f.name: f.type for f in dataclasses.fields(RunSpec)}


def coerce(key, raw):
    """Convert the text value ``raw`` of setting ``key`` to its typed value."""
    types = _field_types()
    if key not in types:
        raise ConfigError(f"unknown setting {key!r}")
    raw = raw.strip()
    try:
        if key in _LIST_ITEM:
            return [_LIST_ITEM[key](v.strip()) for v in raw.split(",") if v.strip()]
        return _SCALAR[types[key]](raw)
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None


def parse_config_text(text):
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, raw = line.split("=", 1)
        key = key.strip().replace("-", "_")
        values[key] = coerce(key, raw)
    return values


def dump_config(spec):
    lines = []
    for f in dataclasses.fields(RunSpec):
        v = getattr(spec, f.name)
        if isinstance(v, list):
            v = ",".join(repr(x) if isinstance(x, float) else str(x) for x in v)
        elif isinstance(v, float):
            v = repr(v)
        lines.append(f"{f.name} = {v}")
    return "\n".join(lines) + "\n"


# Per-command defaults, applied under file and flag overrides.
COMMAND_DEFAULTS = {
    "shrink-demo": {"max_iters": 100, "snapshot_every": 10, "model": "constant",
                    "methods": ["rd", "reinit", "none"], "dt2": 0.1},
    "curvature-demo": {"max_iters": 4000, "snapshot_every": 50, "model": "curvature", "dt2": 0.001},
    "stability-demo": {},
}


def build_spec(command, file_values=None, overrides=None):
    values = {"command": command}
    values.update(COMMAND_DEFAULTS.get(command, {}))
    values.update(file_values or {})
    values.update(overrides or {})
    values["command"] = command
    return RunSpec(**values).validate()


# Building blocks -------------------------------------------------------------

def _deg(a):
    return math.radians(a)


def synthetic_spec(spec):
    name = spec.input.split(":", 1)[1]
    w, h = spec.width, spec.height
    if name == "two_region_disk":
        return TwoRegionDisk(w, h, spec.radius, spec.in_val, spec.out_val)
    if name == "weak_boundary_disk":
        return WeakBoundaryDisk(w, h, spec.radius, spec.in_val, spec.out_val,
                                (_deg(spec.gap_start), _deg(spec.gap_end)), spec.blur_sigma)
    if name == "three_region":
        return ThreeRegion(w, h)
    if name == "multi_object":
        return MultiObject(w, h, default_objects(w, h, spec.in_val), background=spec.out_val)
    raise ConfigError(f"unknown synthetic input {name!r}")


def default_objects(width, height, value):
    """Four separated objects (two disks, two boxes) scaled to the grid."""
    sx, sy = width / 100.0, height / 100.0
    return (Disk(28 * sx, 30 * sy, 12 * min(sx, sy), value),
            Rect(round(55 * sx), round(18 * sy), round(82 * sx), round(42 * sy), value),
            Disk(62 * sx, 70 * sy, 16 * min(sx, sy), value),
            Rect(round(15 * sx), round(62 * sy), round(32 * sx), round(85 * sy), value))


def load_input(spec):
    """Clean image and ground-truth mask (``None`` when unknown)."""
    if spec.input.startswith("synthetic:"):
        return render(synthetic_spec(spec))
    image = pgm.load_image(spec.input)
    truth = pgm.load_mask(spec.truth) if spec.truth else None
    if truth is not None and truth.shape != image.shape:
        raise ConfigError("truth mask and image sizes differ")
    return image, truth


def method_rho(spec, method):
    return spec.gdrlse3_rho if method == "gdrlse3" else spec.rho


def make_model(spec, image, rho):
    if spec.model == "cv":
        return ChanVese(spec.mu, spec.nu, spec.lambda1, spec.lambda2, rho)
    if spec.model == "constant":
        return Constant(spec.c)
    if spec.model == "curvature":
        return Curvature()
    g = edge_indicator(image, spec.edge_sigma)
    if spec.model == "gac":
        return GAC(g, spec.nu)
    return EdgeVariational(g, spec.lam, spec.nu)


def make_formulation(spec, rho):
    kind = spec.formulation or ("variational" if spec.model in ("cv", "edge") else "pde")
    if kind == "pde":
        return PdeBased()
    return Variational(Dirac(spec.dirac, rho))


def make_regularizer(spec, method):
    if method == "rd":
        return RdDiffusion(spec.dt2, spec.substeps)
    if method.startswith("gdrlse"):
        rho3 = spec.gdrlse3_rho if method == "gdrlse3" else spec.rho3
        return Gdrlse("r" + method[-1], spec.alpha, rho3)
    if method == "reinit":
        return Reinit(spec.reinit_period, spec.reinit_steps, spec.reinit_dt, spec.s_variant)
    return Unregularized()


def make_config(spec, method):
    try:
        return EvolutionConfig(
            dt1=spec.dt1,
            regularizer=make_regularizer(spec, method),
            formulation=make_formulation(spec, method_rho(spec, method)),
            max_iters=spec.max_iters,
            stop_check_every=spec.stop_check_every,
            stop_tol=spec.stop_tol,
            snapshot_every=spec.snapshot_every,
        )
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc


def initial_phi(spec, method, shape):
    """Binary step for every method except re-initialization, which starts from a distance field."""
    h, w = shape
    cx = (w - 1) / 2.0 if spec.init_cx < 0 else spec.init_cx
    cy = (h - 1) / 2.0 if spec.init_cy < 0 else spec.init_cy
    if spec.init == "sdf-circle":
        return sdf_circle(w, h, cx, cy, spec.init_r, inside_positive=True)
    mask = Disk(cx, cy, spec.init_r).mask(w, h)
    if method == "reinit":
        return mask_sdf(mask)
    return binary_init(mask, spec.init_magnitude)


def run_one(spec, method, image, truth):
    """Evolve one method on one image; return the result and JS (``None`` without truth)."""
    rho = method_rho(spec, method)
    model = make_model(spec, image, rho)
    cfg = make_config(spec, method)
    result = evolve(initial_phi(spec, method, image.shape), model, image, cfg)
    js = jaccard(result.inside_mask, truth) if truth is not None else None
    return result, js


def _ensure_output_dir(spec):
    if not os.path.isdir(spec.output_dir):
        raise IoFailure(f"output directory {spec.output_dir!r} does not exist")


def _write_text(path, text):
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def _summary_text(items):
    return "".join(f"{k}={v}\n" for k, v in items.items())


def overlay(image, mask):
    """Input image with the mask boundary nodes drawn black."""
    out = np.clip(np.asarray(image, dtype=np.float64), 0, 255).copy()
    out[mask_boundary(mask)] = 0.0
    return out


# Commands ---------------------------------------------------------------------

def run_segment(spec):
    _ensure_output_dir(spec)
    clean, truth = load_input(spec)
    image = add_gaussian_noise(clean, spec.noise_sigmas[0], spec.seeds[0])
    result, js = run_one(spec, spec.method, image, truth)
    out = spec.output_dir
    pgm.save_field_pgm(result.final_phi, os.path.join(out, "phi.pgm"), mode="minmax")
    pgm.save_mask_pgm(result.inside_mask, os.path.join(out, "mask.pgm"))
    pgm.save_field_pgm(overlay(image, result.inside_mask), os.path.join(out, "overlay.pgm"))
    log = "iteration,changed_fraction\n" + "".join(f"{i},{c!r}\n" for i, c in result.history)
    _write_text(os.path.join(out, "convergence.csv"), log)
    summary = {"method": spec.method, "iterations": result.iterations_run,
               "converged": str(result.converged).lower()}
    if js is not None:
        summary["js"] = repr(js)
    _write_text(os.path.join(out, "summary.txt"), _summary_text(summary))
    return summary


BENCH_HEADER = "method,sigma,seed,js,iterations,wall_time_s,error"


def _bench_cell(args):
    spec, method, sigma, seed = args
    clean, truth = load_input(spec)
    image = add_gaussian_noise(clean, sigma, seed)
    try:
        result, js = run_one(spec, method, image, truth)
    except RdlseError as exc:
        return {"method": method, "sigma": sigma, "seed": seed, "js": None,
                "iterations": None, "wall_time_s": None, "error": f"{type(exc).__name__}: {exc}"}
    return {"method": method, "sigma": sigma, "seed": seed, "js": js,
            "iterations": result.iterations_run, "wall_time_s": result.wall_time, "error": ""}


def _fmt(v):
    if v is None:
        return "NA"
    return repr(v) if isinstance(v, float) else str(v)


def benchmark_rows(spec):
    """Evaluate every (method, sigma, seed) cell; rows come back in sweep order.

    The same seed list is reused for every method, so results are paired.
    """
    cells = [(spec, m, s, seed) for m in spec.methods for s in spec.noise_sigmas for seed in spec.seeds]
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            rows = list(pool.map(_bench_cell, cells))
    else:
        rows = [_bench_cell(c) for c in cells]
    order = {m: i for i, m in enumerate(spec.methods)}
    rows.sort(key=lambda r: (order[r["method"]], r["sigma"], r["seed"]))
    return rows


def summarize(rows):
    """Mean JS, iterations and time per (method, sigma), skipping failed rows."""
    groups = {}
    for r in rows:
        groups.setdefault((r["method"], r["sigma"]), []).append(r)
    out = []
    for (method, sigma), rs in groups.items():
        ok = [r for r in rs if r["js"] is not None]
        mean = lambda k: float(np.mean([r[k] for r in ok])) if ok else None
        out.append({"method": method, "sigma": sigma, "seed": "mean", "js": mean("js"),
                    "iterations": mean("iterations"), "wall_time_s": mean("wall_time_s"),
                    "error": "" if len(ok) == len(rs) else f"{len(rs) - len(ok)} failed"})
    return out


def benchmark_csv(rows):
    lines = [BENCH_HEADER]
    for r in rows + summarize(rows):
        lines.append(",".join(_fmt(r[k]) for k in BENCH_HEADER.split(",")))
    return "\n".join(lines) + "\n"


def run_benchmark(spec):
    _ensure_output_dir(spec)
    if not spec.input.startswith("synthetic:") and not spec.truth:
        raise ConfigError("benchmark needs ground truth: use a synthetic input or set truth")
    rows = benchmark_rows(spec)
    _write_text(os.path.join(spec.output_dir, "benchmark.csv"), benchmark_csv(rows))
    return {"rows": len(rows), "failed": sum(1 for r in rows if r["error"])}


def run_compare(spec):
    """Run every listed method once on the same (noisy) input."""
    _ensure_output_dir(spec)
    clean, truth = load_input(spec)
    image = add_gaussian_noise(clean, spec.noise_sigmas[0], spec.seeds[0])
    lines = ["method,js,iterations,converged,wall_time_s"]
    for method in spec.methods:
        result, js = run_one(spec, method, image, truth)
        pgm.save_mask_pgm(result.inside_mask, os.path.join(spec.output_dir, f"mask_{method}.pgm"))
        lines.append(f"{method},{_fmt(js)},{result.iterations_run},"
                     f"{str(result.converged).lower()},{result.wall_time!r}")
    _write_text(os.path.join(spec.output_dir, "compare.csv"), "\n".join(lines) + "\n")
    return {"methods": len(spec.methods)}


def run_shrink_demo(spec):
    """Circle of radius 30 shrinking under ``F = c``; profiles of the middle row per method."""
    _ensure_output_dir(spec)
    phi0 = sdf_circle(100, 100, 50, 50, 30)  # negative inside
    summary = {}
    for method in spec.methods:
        cfg = make_config(dataclasses.replace(spec, formulation="pde"), method)
        result = evolve(phi0, Constant(spec.c), None, cfg)
        base = os.path.join(spec.output_dir, f"shrink_{method}")
        pgm.save_field_pgm(result.final_phi, base + "_phi.pgm", mode="minmax")
        pgm.export_middle_slice(result.snapshots, 50, base + "_slice.csv")
        inside = result.final_phi < 0
        summary[f"{method}.radius"] = repr(estimate_radius(inside)) if inside.any() else "0.0"
        summary[f"{method}.max_abs_phi_ratio"] = repr(float(np.abs(result.final_phi).max() / np.abs(phi0).max()))
        summary[f"{method}.max_grad"] = repr(float(gradient_magnitude(result.final_phi).max()))
    _write_text(os.path.join(spec.output_dir, "summary.txt"), _summary_text(summary))
    return summary


def run_curvature_demo(spec):
    """Mean-curvature shrinking of a radius-30 circle against ``r(t)**2 = 900 - 2t``."""
    _ensure_output_dir(spec)
    phi0 = sdf_circle(100, 100, 50, 50, 30)
    cfg = make_config(dataclasses.replace(spec, formulation="pde"), spec.method)
    result = evolve(phi0, Curvature(), None, cfg)
    lines = ["iteration,radius,expected"]
    for it, phi in result.snapshots:
        inside = phi < 0
        r = estimate_radius(inside) if inside.any() else 0.0
        expected = math.sqrt(max(900.0 - 2.0 * spec.dt1 * it, 0.0))
        lines.append(f"{it},{r!r},{expected!r}")
    _write_text(os.path.join(spec.output_dir, "curvature_radius.csv"), "\n".join(lines) + "\n")
    return {"snapshots": len(result.snapshots)}


def checkerboard(n=16, amplitude=1.0):
    j, i = np.mgrid[0:n, 0:n]
    return amplitude * np.where((i + j) % 2 == 0, 1.0, -1.0)


def run_stability_demo(spec):
    """Measured vs predicted growth of the highest-frequency mode for each ``dt2``."""
    _ensure_output_dir(spec)
    lines = ["dt2,measured,predicted,stable"]
    board = checkerboard()
    for dt2 in spec.dt2_values:
        out = diffusion_step(board, dt2, unsafe=True)
        measured = float(out[8, 8] / board[8, 8])
        predicted = amplification_factor(dt2, math.pi, math.pi)
        lines.append(f"{dt2!r},{measured!r},{predicted!r},{str(abs(predicted) <= 1).lower()}")
    _write_text(os.path.join(spec.output_dir, "stability.csv"), "\n".join(lines) + "\n")
    return {"rows": len(spec.dt2_values)}


RUNNERS = {
    "segment": run_segment,
    "shrink-demo": run_shrink_demo,
    "curvature-demo": run_curvature_demo,
    "stability-demo": run_stability_demo,
    "benchmark": run_benchmark,
    "compare": run_compare,
}


def run(spec):
    return RUNNERS[spec.command](spec)
