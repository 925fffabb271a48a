"""Subcommand bodies: each takes a config record and an output root and
returns the list of files it wrote."""

from dataclasses import asdict
import math
from pathlib import Path

import numpy as np

from .coincidence import NoiseParams, simulate_counts
from .errors import InputFileError, InvalidArgumentError, ResourceError
from .fileio import read_csv, scale_to_pgm, write_csv, write_json, write_pgm
from .ghost import decompose, mark_detection_report, overlap, sweep_overlap
from .grover import ProbabilityVector, grover_iterate, success_probability
from .state import (
    apply_oracle,
    builtin_object,
    effective_block_side,
    gaussian_profile,
    load_object,
    schmidt_number,
    uniform_block_profile,
)
from .walsh import check_side, mask_2d, render_superpixel, superposition_mask

MAX_MASK_EXPORT_PIXELS = 1 << 31
PART_NAMES = ("total", "delta", "s", "object")


def resolve(out_dir, name):
    p = Path(name)
    if not p.is_absolute():
        p = Path(out_dir) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def make_state(profile, m, n=None, waist=None, placement="auto"):
    if profile == "uniform":
        return uniform_block_profile(m, m if n is None else n, placement)
    if profile == "gaussian":
        return gaussian_profile(m, m / 4.0 if waist is None else waist)
    raise InvalidArgumentError(f"profile must be 'uniform' or 'gaussian' (got {profile!r})")


def resolve_object(spec, m):
    """``builtin:<name>`` or a path to an ASCII/PGM raster."""
    if spec.startswith("builtin:"):
        return builtin_object(spec.split(":", 1)[1], m)
    return load_object(spec, m=m)


def state_summary(state):
    return {
        "m": state.m,
        "profile": state.meta,
        "schmidt_number": schmidt_number(state),
        "effective_block_side": effective_block_side(state),
        "norm": state.norm,
    }


# -- masks ----------------------------------------------------------------------

def run_masks_export(cfg, out_dir):
    m = check_side(cfg.m)
    screen = m if cfg.screen is None else cfg.screen
    if cfg.kind not in ("h", "q"):
        raise InvalidArgumentError(f"kind must be 'h' or 'q' (got {cfg.kind!r})")
    if screen < m or screen % m:
        raise InvalidArgumentError(f"screen size {screen} is not a multiple of m={m}")
    M = m * m
    if M * screen * screen > MAX_MASK_EXPORT_PIXELS:
        raise ResourceError(f"exporting {M} masks of {screen}x{screen} exceeds the size cap")
    root = Path(out_dir) / cfg.out
    root.mkdir(parents=True, exist_ok=True)
    digits = len(str(M - 1))
    written, index = [], []
    for j in range(M):
        if cfg.kind == "h":
            vals = mask_2d(j, m, cfg.ordering).values
            pixels = np.rint(127.5 * (vals + 1.0))
        else:
            vals = superposition_mask(j, m, cfg.ordering).values
            pixels = np.rint(vals / math.sqrt(2.0) * 255.0)
        name = f"{cfg.kind}_{j:0{digits}d}.pgm"
        write_pgm(root / name, render_superpixel(pixels.astype(np.int64), screen))
        u, v = divmod(j, m)
        index.append({"j": j, "u": u, "v": v, "file": name})
        written.append(root / name)
    manifest = {
        "m": m, "ordering": cfg.ordering, "kind": cfg.kind, "screen": screen,
        "superpixel": screen // m, "normalization_view": "mask",
        "pixel_map": ({"-1": 0, "0": 128, "+1": 255} if cfg.kind == "h"
                      else {"0": 0, "sqrt2": 255}),
        "masks": index,
    }
    write_json(root / "index.json", manifest)
    written.append(root / "index.json")
    return written


# -- grover ---------------------------------------------------------------------

def run_grover(cfg, out_dir):
    state = make_state(cfg.profile, cfg.m, cfg.n, cfg.waist, cfg.placement)
    obj = resolve_object(cfg.object, cfg.m)
    lam = state.lam.ravel()
    marked_mass = float(np.sum(lam[obj.marks.ravel()] ** 2))
    theta = math.asin(math.sqrt(min(1.0, marked_mass)))
    if cfg.iterations == "auto":
        k = 0 if theta in (0.0, math.pi / 2) else max(0, round(math.pi / (4 * theta) - 0.5))
    else:
        try:
            k = int(cfg.iterations)
        except ValueError:
            raise InvalidArgumentError("iterations must be an integer or 'auto'") from None
        if k < 0:
            raise InvalidArgumentError("iterations must be >= 0")
    v = grover_iterate(state, obj, k)
    p = v**2
    m = cfg.m
    out = resolve(out_dir, cfg.out)
    write_csv(out, ["j", "x", "y", "p_j"],
              ((j, j % m, j // m, p[j]) for j in range(m * m)))
    summary = {
        "convention": "physical",
        "basis": "grover (pixel basis after diffusion)",
        "iterations": k,
        "iterations_requested": cfg.iterations,
        "theta": theta,
        "marked_count": obj.count,
        "success_mass": success_probability(v, obj),
        "predicted_success": math.sin((2 * k + 1) * theta) ** 2,
        "M": m * m,
    }
    summary_path = out.with_name(out.stem + "_summary.json")
    write_json(summary_path, summary)
    return [out, summary_path]


# -- reconstruction ----------------------------------------------------------------

def write_image_parts(prefix, img):
    """Write the four part images as 16-bit PGMs plus the scale metadata."""
    parts = {"total": img.total, "delta": img.delta_part, "s": img.s_part,
             "object": img.object_part}
    written, meta = [], {"origin_pixel": [0, 0], "convention": img.convention,
                         "mean_term": img.mean_term, "images": {}}
    for name, arr in parts.items():
        pixels, scale = scale_to_pgm(arr)
        path = prefix.with_name(f"{prefix.name}_{name}.pgm")
        write_pgm(path, pixels, scale["maxval"])
        meta["images"][name] = dict(scale, file=path.name)
        written.append(path)
    meta_path = prefix.with_name(f"{prefix.name}_meta.json")
    write_json(meta_path, meta)
    written.append(meta_path)
    return written


def write_probs(path, p):
    vals = p.p if isinstance(p, ProbabilityVector) else np.asarray(p).ravel()
    write_csv(path, ["j", "p_j"], ((j, vals[j]) for j in range(vals.size)))


def reconstruction_report(img, state, obj, threshold):
    rep = overlap(img, state)
    md = mark_detection_report(img, obj, state, threshold)
    return {
        "convention": img.convention,
        "mean_term": img.mean_term,
        "overlap": rep.overlap,
        "contrast": asdict(md),
        "schmidt_number": schmidt_number(state),
        "effective_block_side": effective_block_side(state),
        "decomposition_residual": img.residual,
        "profile": state.meta,
        "marked_count": obj.count,
    }


def run_reconstruct(cfg, out_dir):
    state = make_state(cfg.profile, cfg.m, cfg.n, cfg.waist, cfg.placement)
    obj = resolve_object(cfg.object, cfg.m)
    img = decompose(apply_oracle(state, obj), cfg.convention)
    prefix = resolve(out_dir, cfg.out_prefix)
    written = write_image_parts(prefix, img)
    probs_path = prefix.with_name(f"{prefix.name}_probs.csv")
    write_probs(probs_path, img.probabilities)
    report_path = prefix.with_name(f"{prefix.name}_report.json")
    write_json(report_path, reconstruction_report(img, state, obj, cfg.support_threshold))
    return written + [probs_path, report_path]


# -- sweeps -----------------------------------------------------------------------

def write_sweep(path, result):
    size_name = "n" if result.profile == "uniform" else "waist"
    write_csv(path, ["m", size_name, "overlap"], result.rows())


def run_sweep(cfg, out_dir):
    if cfg.profile == "uniform":
        if cfg.n_list is None:
            raise InvalidArgumentError("uniform sweeps need --n-list")
        sizes = cfg.n_list
    elif cfg.profile == "gaussian":
        if cfg.waist_list is None:
            raise InvalidArgumentError("gaussian sweeps need --waist-list")
        sizes = cfg.waist_list
    else:
        raise InvalidArgumentError(f"profile must be 'uniform' or 'gaussian' (got {cfg.profile!r})")
    result = sweep_overlap(cfg.m_list, sizes, cfg.profile, cfg.placement)
    out = resolve(out_dir, cfg.out)
    write_sweep(out, result)
    return [out]


# -- counts -----------------------------------------------------------------------

COUNT_COLUMNS = ["j", "coincidences", "singles_a", "singles_b", "accidentals_est",
                 "corrected", "clamped"]


def read_probs(path):
    rows = read_csv(path)
    if not rows or "p_j" not in rows[0] or "j" not in rows[0]:
        raise InputFileError(f"{path}: expected a CSV with 'j' and 'p_j' columns")
    try:
        rows.sort(key=lambda r: int(r["j"]))
        return np.array([float(r["p_j"]) for r in rows])
    except (TypeError, ValueError) as exc:
        raise InputFileError(f"{path}: {exc}") from None


def run_simulate_counts(cfg, out_dir):
    src = Path(cfg.probs)
    if not src.is_absolute() and (Path(out_dir) / src).exists():
        src = Path(out_dir) / src
    p = read_probs(src)
    params = NoiseParams(cfg.pair_rate, cfg.singles_a, cfg.singles_b, cfg.gate,
                         cfg.integration, cfg.seed)
    counts = simulate_counts(p, params)
    out = resolve(out_dir, cfg.out)
    write_csv(out, COUNT_COLUMNS, counts.rows())
    return [out]
