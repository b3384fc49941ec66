"""Task execution and deterministic file emission.

Every handler turns a validated config into (filename, bytes) pairs; run()
writes them atomically (temp file + rename) under the output directory.
Numbers are formatted with 12 significant digits and LF line endings so
repeated runs are byte-identical.
"""

from __future__ import annotations

import math
import os
import sys
import tempfile

import numpy as np

from .boxcount import estimate_box_dims
from .config import ExperimentConfig
from .dimension import (minimize_carpet_dimension, random_carpet_dimension,
                        randomized_similarity_dimension)
from .errors import UsageError
from .measure import CylinderMeasure, mdp_bounds
from .model import (DEFAULT_BUDGET, BernoulliSampler, attractor_points,
                    cylinder_images, sample_omega)
from .render import RenderSpec, render_ppm
from .sequences import omega_distance, splice


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, bool):
        raise UsageError("boolean has no CSV form")
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".12g")


def _csv(header, rows) -> bytes:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return ("\n".join(lines) + "\n").encode("utf-8")


def _seq_text(seq) -> str:
    # space-separated to stay comma-free inside CSV cells
    return (" ".join(str(s) for s in seq.prefix) + "|"
            + " ".join(str(s) for s in seq.cycle))


def _all_carpets(cfg: ExperimentConfig) -> bool:
    return all(c is not None for c in cfg.carpets)


def _task_dim(cfg: ExperimentConfig, budget: int):
    params = cfg.task.params
    weights = params["weights"]
    if _all_carpets(cfg):
        value = random_carpet_dimension(list(cfg.carpets), weights)
        rows = [("dimension", value),
                ("equation", "carpet_product_formula"),
                ("residual", 0.0)]
    else:
        for sys_ in cfg.systems:
            if any(m.kind != "similarity" for m in sys_.maps):
                raise UsageError(
                    "dim task needs all-similarity or all-carpet systems")
        rep = randomized_similarity_dimension(
            [[m.lip_hi for m in s.maps] for s in cfg.systems], weights)
        rows = [("dimension", rep.value),
                ("equation", rep.equation),
                ("residual", rep.residual)]
    return [(params["output"], _csv(("name", "value"), rows))]


def _task_curve(cfg: ExperimentConfig, budget: int):
    params = cfg.task.params
    grid = params["grid"]
    carpets = list(cfg.carpets)
    rows = []
    for i in range(grid):
        p = i / (grid - 1)
        rows.append((p, random_carpet_dimension(carpets, (p, 1.0 - p))))
    return [(params["output"], _csv(("p", "dimension"), rows))]


def _task_minimize(cfg: ExperimentConfig, budget: int):
    params = cfg.task.params
    p_star, value = minimize_carpet_dimension(list(cfg.carpets),
                                              params["tol"])
    rows = [("p_star", p_star), ("dimension", value), ("tol", params["tol"])]
    return [(params["output"], _csv(("name", "value"), rows))]


def _task_boxdim(cfg: ExperimentConfig, budget: int):
    params = cfg.task.params
    table, est = estimate_box_dims(cfg.rifs, cfg.omega, params["deltas"],
                                   budget)
    rows = [(delta, count, depth, exp)
            for (delta, count), depth, exp in zip(table.rows, est.depths,
                                                  est.exponents)]
    summary = [("lower_est", est.lower_est),
               ("upper_est", est.upper_est),
               ("slope", est.slope),
               ("window_start", est.window[0]),
               ("window_stop", est.window[1])]
    return [(params["output"],
             _csv(("delta", "count", "depth", "exponent"), rows)),
            (params["summary"], _csv(("name", "value"), summary))]


def _task_measure_bounds(cfg: ExperimentConfig, budget: int):
    params = cfg.task.params
    exponents = tuple(params.get("exponents", ()))
    cm = CylinderMeasure(cfg.rifs, cfg.omega, exponents)
    rep = mdp_bounds(cm, params["s"], params["radii"], params["points"],
                     budget)
    coords = ("x",) if cfg.ambient.dim == 1 else ("x", "y")
    rows = [point + (r, outer, inner)
            for point, r, outer, inner in rep.rows]
    summary = [("s", rep.s), ("depth", rep.depth),
               ("lambda_sup", rep.lambda_sup),
               ("lambda_inf", rep.lambda_inf),
               ("h_lower", rep.h_lower), ("p_upper", rep.p_upper)]
    return [(params["output"],
             _csv(coords + ("radius", "outer_mass", "inner_mass"), rows)),
            (params["summary"], _csv(("name", "value"), summary))]


def _task_render(cfg: ExperimentConfig, budget: int):
    params = cfg.task.params
    if "depth" in params:
        center = np.asarray(cfg.ambient.center)[None, :]
        pts = cylinder_images(cfg.rifs, cfg.omega, params["depth"], center,
                              budget)
        target = params.get("target_error", 1.0)
    else:
        approx = attractor_points(cfg.rifs, cfg.omega,
                                  params["target_error"], budget)
        pts = approx.points
        target = params["target_error"]
    spec = RenderSpec(params["width"], params["height"], target,
                      params.get("foreground", (0, 0, 0)),
                      params.get("background", (255, 255, 255)))
    return [(params["output"], render_ppm(pts, spec, cfg.ambient))]


def _task_splice_demo(cfg: ExperimentConfig, budget: int):
    params = cfg.task.params
    eps = params["epsilon"]
    k = max(0, math.ceil(math.log2(1.0 / eps)))
    tail = params["tail"]
    gauge = params["gauge"]
    spliced = splice(cfg.omega, k, tail)
    d_om = omega_distance(cfg.omega, spliced)
    seeds = np.asarray(params["seed_set"], dtype=float)
    n_seeds = seeds.shape[0]
    spliced_text = _seq_text(spliced)
    rows = []
    for depth in range(1, params["max_depth"] + 1):
        pts = cylinder_images(cfg.rifs, spliced, depth, seeds, budget)
        count = pts.shape[0] // n_seeds
        blocks = pts.reshape(count, n_seeds, -1)
        d2 = np.zeros(count)
        for i in range(n_seeds):
            for j in range(i + 1, n_seeds):
                pair = ((blocks[:, i, :] - blocks[:, j, :]) ** 2).sum(axis=1)
                d2 = np.maximum(d2, pair)
        diams = np.sqrt(d2)
        mass = float(np.asarray(gauge(diams)).sum())
        rows.append((depth, count, float(diams.max(initial=0.0)), mass,
                     k, d_om, spliced_text))
    header = ("depth", "cylinder_count", "piece_diam_max", "cover_mass",
              "k", "d_omega", "spliced")
    return [(params["output"], _csv(header, rows))]


def _task_sample(cfg: ExperimentConfig, budget: int):
    params = cfg.task.params
    sampler = BernoulliSampler(tuple(params["weights"]), cfg.seed)
    seq = sample_omega(sampler, params["horizon"])
    rows = [(i + 1, sym) for i, sym in enumerate(seq.prefix)]
    return [(params["output"], _csv(("index", "symbol"), rows))]


_HANDLERS = {
    "dim": _task_dim,
    "curve": _task_curve,
    "minimize": _task_minimize,
    "boxdim": _task_boxdim,
    "measure-bounds": _task_measure_bounds,
    "render": _task_render,
    "splice-demo": _task_splice_demo,
    "sample": _task_sample,
}


def _write_atomic(path: str, data: bytes) -> None:
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".rifslab-", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def run(cfg: ExperimentConfig, out_dir: str = ".",
        budget: int = DEFAULT_BUDGET) -> list[str]:
    """Execute the config's task, write its outputs, return written paths."""
    handler = _HANDLERS[cfg.task.type]
    label = cfg.description or cfg.task.type
    print(f"rifslab: running {label!r} (task {cfg.task.type}, "
          f"seed {cfg.seed}, budget {budget})", file=sys.stderr)
    outputs = handler(cfg, budget)
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for name, data in outputs:
        path = os.path.join(out_dir, name)
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        _write_atomic(path, data)
        print(f"rifslab: wrote {path} ({len(data)} bytes)", file=sys.stderr)
        written.append(path)
    return written
