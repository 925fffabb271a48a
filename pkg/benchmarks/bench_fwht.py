"""Compare the numba and numpy fast Walsh-Hadamard kernels.

    python3 benchmarks/bench_fwht.py --sizes 10 12 14 16 --rows 1 64

Prints one line per (length, rows) with the best-of-N wall time of each
backend and the speedup.  ``--json FILE`` also writes the raw numbers.
"""

import argparse
import json
import sys
import time

import numpy as np

from ghostgrover import _accel


def best_time(fn, x, repeat):
    fn(x.copy())  # warm-up (and numba compilation)
    best = float("inf")
    for _ in range(repeat):
        work = x.copy()
        t0 = time.perf_counter()
        fn(work)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 12, 14, 16],
                    help="log2 of the transform length")
    ap.add_argument("--rows", type=int, nargs="+", default=[1, 64])
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--json", dest="json_out")
    args = ap.parse_args(argv)

    if not _accel.HAVE_NUMBA:
        print("numba is not importable; only the numpy kernel can run", file=sys.stderr)
    rng = np.random.default_rng(0)
    results = []
    print(f"{'length':>8} {'rows':>5} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for k in args.sizes:
        for rows in args.rows:
            x = rng.normal(size=(rows, 2**k))
            t_np = best_time(_accel.fwht_rows_numpy, x, args.repeat)
            t_nb = (best_time(_accel.fwht_rows_numba, x, args.repeat)
                    if _accel.HAVE_NUMBA else float("nan"))
            results.append({"length": 2**k, "rows": rows, "numpy_s": t_np, "numba_s": t_nb})
            print(f"{2**k:>8} {rows:>5} {1e3 * t_np:>10.3f} {1e3 * t_nb:>10.3f} "
                  f"{t_np / t_nb:>8.2f}")
    if args.json_out:
        with open(args.json_out, "w") as fh:
            json.dump(results, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
