"""Command-line interface.

Exit codes: 0 success, 2 usage/validation error, 3 I/O or input-file error,
4 resource cap exceeded.  Every run writes ``run_manifest.json`` into the
output directory (``--out-dir``, else ``$GHOSTGROVER_OUT_DIR``, else ``.``).
"""

import argparse
from dataclasses import asdict
import os
from pathlib import Path
import sys
import time

from . import __version__, _accel
from .config import (
    COMMANDS,
    ExperimentConfig,
    build_params,
)
from .errors import GhostGroverError, InputFileError, InvalidArgumentError, ResourceError
from .fileio import dumps_json, sha256_file, write_json
from .figures import preset_names, run_figure
from .runner import (
    make_state,
    run_grover,
    run_masks_export,
    run_reconstruct,
    run_simulate_counts,
    run_sweep,
    state_summary,
)

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_RESOURCE = 0, 2, 3, 4
MANIFEST_NAME = "run_manifest.json"
S = argparse.SUPPRESS


def _int_list(text):
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers: {text!r}")


def _float_list(text):
    try:
        return [float(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers: {text!r}")


def _global_parent():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--config", default=S, help="JSON config file; explicit flags override it")
    g.add_argument("--out-dir", default=S, help="output root (default $GHOSTGROVER_OUT_DIR or .)")
    g.add_argument("--seed", type=int, default=S, help="RNG seed for stochastic commands")
    g.add_argument("--threads", type=int, default=S, help="worker threads for numba kernels")
    g.add_argument("--quiet", action="store_true", default=S, help="suppress progress output")
    return p


def _add_profile_args(p):
    p.add_argument("--m", type=int, default=S, help="grid side (power of two)")
    p.add_argument("--profile", choices=["uniform", "gaussian"], default=S)
    p.add_argument("--n", type=int, default=S, help="uniform block side (default m)")
    p.add_argument("--waist", type=float, default=S,
                   help="gaussian 1/e^2 intensity radius in pixels (amplitude exp(-r^2/w^2))")
    p.add_argument("--placement", choices=["auto", "centered", "origin"], default=S)


def build_parser():
    parent = _global_parent()
    parser = argparse.ArgumentParser(
        prog="ghostgrover", parents=[parent],
        description="Ghost imaging as Grover search: masks, states, reconstructions, figures.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    masks = sub.add_parser("masks", help="Walsh-Hadamard mask utilities")
    msub = masks.add_subparsers(dest="action", required=True)
    exp = msub.add_parser("export", parents=[parent], help="write masks as PGM files")
    exp.add_argument("--m", type=int, default=S)
    exp.add_argument("--ordering", choices=["natural", "sequency"], default=S)
    exp.add_argument("--kind", choices=["h", "q"], default=S)
    exp.add_argument("--screen", type=int, default=S, help="rendered side in pixels")
    exp.add_argument("--out", default=S, help="output directory (relative to --out-dir)")

    state = sub.add_parser("state", help="Schmidt state utilities")
    ssub = state.add_subparsers(dest="action", required=True)
    info = ssub.add_parser("info", parents=[parent], help="print K, n_eff and norm as JSON")
    _add_profile_args(info)

    grover = sub.add_parser("grover", help="Grover search on the idler")
    gsub = grover.add_subparsers(dest="action", required=True)
    run = gsub.add_parser("run", parents=[parent], help="iterate and write probabilities")
    _add_profile_args(run)
    run.add_argument("--object", default=S, help="builtin:<name> or raster path")
    run.add_argument("--iterations", default=S, help="integer or 'auto'")
    run.add_argument("--out", default=S)

    rec = sub.add_parser("reconstruct", parents=[parent],
                         help="ghost image in the superposition basis + decomposition")
    _add_profile_args(rec)
    rec.add_argument("--object", default=S)
    rec.add_argument("--convention", choices=["paper", "physical"], default=S)
    rec.add_argument("--support-threshold", type=float, default=S)
    rec.add_argument("--out-prefix", default=S)

    sw = sub.add_parser("sweep-overlap", parents=[parent], help="overlap heatmap")
    sw.add_argument("--profile", choices=["uniform", "gaussian"], default=S)
    sw.add_argument("--m-list", type=_int_list, default=S)
    sw.add_argument("--n-list", type=_int_list, default=S)
    sw.add_argument("--waist-list", type=_float_list, default=S)
    sw.add_argument("--placement", choices=["auto", "centered", "origin"], default=S)
    sw.add_argument("--out", default=S)

    sc = sub.add_parser("simulate-counts", parents=[parent], help="Poisson coincidence counts")
    sc.add_argument("--probs", default=S)
    sc.add_argument("--pair-rate", type=float, default=S)
    sc.add_argument("--singles-a", type=float, default=S)
    sc.add_argument("--singles-b", type=float, default=S)
    sc.add_argument("--gate", type=float, default=S)
    sc.add_argument("--integration", type=float, default=S)
    sc.add_argument("--out", default=S)

    fig = sub.add_parser("figures", parents=[parent], help="run a figure preset")
    fig.add_argument("preset", choices=preset_names())
    return parser


GLOBAL_KEYS = {"config", "out_dir", "seed", "threads", "quiet", "command", "action"}


def _command_key(ns):
    action = getattr(ns, "action", None)
    return f"{ns.command} {action}" if action else ns.command


def resolve_config(ns):
    """Merge dataclass defaults < config file < explicit flags."""
    key = _command_key(ns)
    cls = COMMANDS[key]
    values = {}
    if hasattr(ns, "config"):
        try:
            text = Path(ns.config).read_text()
        except OSError as exc:
            raise InvalidArgumentError(f"cannot read config {ns.config}: {exc.strerror}") from None
        cfg = ExperimentConfig.from_json(text)
        if cfg.command != key:
            raise InvalidArgumentError(f"config is for {cfg.command!r}, not {key!r}")
        values = asdict(cfg.params)
    flags = {k: v for k, v in vars(ns).items() if k not in GLOBAL_KEYS}
    values.update(flags)
    if hasattr(ns, "seed") and "seed" in {f for f in cls.__dataclass_fields__}:
        values["seed"] = ns.seed
    return ExperimentConfig(key, build_params(cls, values))


def out_root(ns):
    root = getattr(ns, "out_dir", None) or os.environ.get("GHOSTGROVER_OUT_DIR") or "."
    return Path(root)


def execute(cfg, root):
    """Run a resolved config; returns ``(files, stdout_payload)``."""
    p = cfg.params
    if cfg.command == "masks export":
        return run_masks_export(p, root), None
    if cfg.command == "state info":
        state = make_state(p.profile, p.m, p.n, p.waist, p.placement)
        return [], state_summary(state)
    if cfg.command == "grover run":
        return run_grover(p, root), None
    if cfg.command == "reconstruct":
        return run_reconstruct(p, root), None
    if cfg.command == "sweep-overlap":
        return run_sweep(p, root), None
    if cfg.command == "simulate-counts":
        return run_simulate_counts(p, root), None
    if cfg.command == "figures":
        files, _ = run_figure(p.preset, root, p.seed)
        return files, None
    raise InvalidArgumentError(f"unknown command {cfg.command!r}")  # pragma: no cover


def write_manifest(root, cfg, files, elapsed):
    root = Path(root)
    entries = []
    for f in sorted({Path(f).resolve() for f in files}):
        try:
            rel = f.relative_to(root.resolve()).as_posix()
        except ValueError:
            rel = str(f)
        entries.append({"path": rel, "sha256": sha256_file(f), "bytes": f.stat().st_size})
    seeds = [cfg.params.seed] if hasattr(cfg.params, "seed") else []
    manifest = {
        "artifact_version": __version__,
        "config": cfg.to_dict(),
        "seeds": seeds,
        "numeric_backend": _accel.active_backend(),
        "wall_clock_seconds": round(elapsed, 6),
        "outputs": entries,
    }
    path = root / MANIFEST_NAME
    write_json(path, manifest)
    return path


def _err(msg):
    print(f"ghostgrover: error: {msg}", file=sys.stderr)


def main(argv=None):
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    quiet = getattr(ns, "quiet", False)
    try:
        if hasattr(ns, "threads"):
            try:
                _accel.set_num_threads(ns.threads)
            except ValueError as exc:
                raise InvalidArgumentError(str(exc)) from None
        cfg = resolve_config(ns)
        root = out_root(ns)
        root.mkdir(parents=True, exist_ok=True)
        t0 = time.perf_counter()
        files, payload = execute(cfg, root)
        manifest = write_manifest(root, cfg, files, time.perf_counter() - t0)
    except ResourceError as exc:
        _err(exc)
        return EXIT_RESOURCE
    except InputFileError as exc:
        _err(exc)
        return EXIT_IO
    except (InvalidArgumentError, GhostGroverError) as exc:
        _err(exc)
        return EXIT_USAGE
    except OSError as exc:
        _err(f"{exc.filename or ''}: {exc.strerror or exc}")
        return EXIT_IO
    if payload is not None:
        sys.stdout.write(dumps_json(payload))
    if not quiet:
        print(f"wrote {len(files)} file(s); manifest {manifest}", file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
