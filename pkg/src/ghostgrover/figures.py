"""Figure presets: fixed parameter sets for every simulated figure panel.

All free parameters live in ``data/presets.json`` (versioned).  Each preset
writes into ``<out_dir>/<preset>/`` and returns the files plus a summary.
"""

from dataclasses import asdict
import json
from importlib import resources
from pathlib import Path

import numpy as np

from .coincidence import NoiseParams, noisy_reconstruct, pair_rate_for_total
from .errors import InvalidArgumentError
from .fileio import scale_to_pgm, write_csv, write_json, write_pgm
from .ghost import decompose, default_sweep_object, ghost_probabilities, mark_detection_report, sweep_overlap
from .grover import grover_iterate
from .runner import (
    COUNT_COLUMNS,
    make_state,
    reconstruction_report,
    resolve_object,
    write_image_parts,
    write_probs,
    write_sweep,
)
from .state import apply_oracle


def load_presets():
    text = resources.files("ghostgrover.data").joinpath("presets.json").read_text()
    return json.loads(text)


def preset_names():
    return sorted(load_presets()["presets"])


def _write_scaled(path, img):
    pixels, meta = scale_to_pgm(img)
    write_pgm(path, pixels, meta["maxval"])
    return meta


def _noise_params(p, spec, seed):
    T = spec["integration"]
    rate = pair_rate_for_total(p, spec["expected_signal_total"], T)
    return NoiseParams(rate, spec["singles_rate_a"], spec["singles_rate_b"],
                       spec["gate"], T, seed)


def _grover_image(name, cfg, root, seed):
    m = cfg["m"]
    state = make_state(cfg["profile"], m, waist=cfg["waist"])
    obj = resolve_object(cfg["object"], m)
    v = grover_iterate(state, obj, cfg["iterations"])
    img = (v**2).reshape(m, m)
    files = [root / f"{name}_image.pgm", root / f"{name}_probs.csv",
             root / f"{name}_report.json"]
    scale = _write_scaled(files[0], img)
    write_csv(files[1], ["j", "x", "y", "p_j"],
              ((j, j % m, j // m, img.flat[j]) for j in range(m * m)))
    max_marked = float(img[obj.marks].max())
    max_unmarked = float(img[~obj.marks].max())
    report = {
        "convention": "physical",
        "iterations": cfg["iterations"],
        "max_marked": max_marked,
        "max_unmarked": max_unmarked,
        "argmax_is_marked": bool(obj.marks.flat[int(np.argmax(img))]),
        "verdict": max_marked > max_unmarked,
        "image_scale": scale,
    }
    write_json(files[2], report)
    return files, report


def _ghost_image(name, cfg, root, seed):
    m = cfg["m"]
    state = make_state(cfg["profile"], m, waist=cfg["waist"])
    obj = resolve_object(cfg["object"], m)
    img = decompose(apply_oracle(state, obj), cfg["convention"])
    files = write_image_parts(root / name, img)
    probs = root / f"{name}_probs.csv"
    write_probs(probs, img.probabilities)
    report = reconstruction_report(img, state, obj, cfg["support_threshold"])
    rpath = root / f"{name}_report.json"
    write_json(rpath, report)
    return files + [probs, rpath], report


def _noisy_outputs(stem, idler, cfg, state, obj, seed):
    ideal_p = ghost_probabilities(idler, cfg["convention"])
    params = _noise_params(ideal_p, cfg["noise"], seed)
    res = noisy_reconstruct(idler, cfg["convention"], params)
    img_path = stem.with_name(stem.name + "_noisy.pgm")
    counts_path = stem.with_name(stem.name + "_counts.csv")
    est_path = stem.with_name(stem.name + "_estimate.csv")
    _write_scaled(img_path, res.noisy_total)
    write_csv(counts_path, COUNT_COLUMNS, res.counts.rows())
    write_probs(est_path, res.estimate)
    md = mark_detection_report(res.noisy_total, obj, state, cfg["support_threshold"])
    summary = {"correlation": res.correlation, "pair_rate": params.pair_rate,
               "seed": seed, "clamped_masks": int(res.estimate.clamped.sum()),
               "contrast": asdict(md)}
    return [img_path, counts_path, est_path], summary


def _database_series(name, cfg, root, seed):
    m = cfg["m"]
    files, rows = [], []
    for n in cfg["n_list"]:
        state = make_state("uniform", m, n=n, placement=cfg["placement"])
        if cfg["object"] == "center":
            obj = default_sweep_object(state)
        else:
            obj = resolve_object(cfg["object"], m)
        idler = apply_oracle(state, obj)
        img = decompose(idler, cfg["convention"])
        stem = root / f"n{n}"
        files += write_image_parts(stem, img)
        report = reconstruction_report(img, state, obj, cfg["support_threshold"])
        report["n"] = n
        if "noise" in cfg:
            extra, noisy = _noisy_outputs(stem, idler, cfg, state, obj, seed)
            files += extra
            report["noisy"] = noisy
        rows.append(report)
    rpath = root / f"{name}_report.json"
    write_json(rpath, {"m": m, "series": rows})
    return files + [rpath], {"series": rows}


def _sweep(name, cfg, root, seed):
    res = sweep_overlap(cfg["m_list"], cfg["sizes"], cfg["profile"], cfg["placement"])
    path = root / "heatmap.csv"
    write_sweep(path, res)
    summary = {"profile": res.profile, "m_list": res.m_list, "sizes": res.sizes}
    if res.profile == "uniform":
        below, above = [], []
        for m, n, v in res.rows():
            if np.isnan(v):
                continue
            (below if n <= m / 2 else above).append(v)
        summary["max_overlap_n_le_half"] = max(below) if below else None
        summary["min_overlap_n_gt_half"] = min(above) if above else None
    rpath = root / f"{name}_report.json"
    write_json(rpath, summary)
    return [path, rpath], summary


def _object_gallery(name, cfg, root, seed):
    files, rows = [], []
    for case in cfg["cases"]:
        m = case["m"]
        state = make_state(cfg["profile"], m, waist=cfg["waist_fraction"] * m)
        obj = resolve_object(case["object"], m)
        idler = apply_oracle(state, obj)
        img = decompose(idler, cfg["convention"])
        stem = root / case["name"]
        files += write_image_parts(stem, img)
        probs = stem.with_name(stem.name + "_probs.csv")
        write_probs(probs, img.probabilities)
        files.append(probs)
        report = reconstruction_report(img, state, obj, cfg["support_threshold"])
        extra, noisy = _noisy_outputs(stem, idler, cfg, state, obj, seed)
        files += extra
        report.update(name=case["name"], noisy=noisy)
        rows.append(report)
    rpath = root / f"{name}_report.json"
    write_json(rpath, {"cases": rows})
    return files + [rpath], {"cases": rows}


KINDS = {
    "grover-image": _grover_image,
    "ghost-image": _ghost_image,
    "database-series": _database_series,
    "sweep": _sweep,
    "object-gallery": _object_gallery,
}


def run_figure(preset, out_dir, seed=0):
    presets = load_presets()["presets"]
    if preset not in presets:
        raise InvalidArgumentError(
            f"unknown figure preset {preset!r}; choose from {', '.join(sorted(presets))}"
        )
    cfg = presets[preset]
    root = Path(out_dir) / preset
    root.mkdir(parents=True, exist_ok=True)
    return KINDS[cfg["kind"]](preset, cfg, root, seed)
