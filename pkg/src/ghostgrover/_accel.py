"""Hot kernels with a numba path and a pure-numpy fallback.

The numba path is used when numba imports cleanly and the environment
variable ``GHOSTGROVER_DISABLE_NUMBA`` is unset, empty or ``"0"``.  Both
paths operate in place on a C-contiguous float64 array of shape
``(rows, n)`` with ``n`` a power of two and produce bit-identical results
(same butterfly order, same additions).
"""

import os
import warnings

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_disabled = os.environ.get("GHOSTGROVER_DISABLE_NUMBA", "").strip() not in ("", "0")

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not _disabled


def fwht_rows_numpy(x):
    """In-place unnormalized natural-order Walsh-Hadamard transform of each row."""
    rows, n = x.shape
    h = 1
    while h < n:
        v = x.reshape(rows, n // (2 * h), 2, h)
        a = v[:, :, 0, :].copy()
        b = v[:, :, 1, :]
        v[:, :, 0, :] += b
        a -= b
        v[:, :, 1, :] = a
        h *= 2
    return x


if HAVE_NUMBA:

    @numba.njit(cache=True, nogil=True)
    def fwht_rows_numba(x):
        rows, n = x.shape
        for r in range(rows):
            h = 1
            while h < n:
                for i in range(0, n, 2 * h):
                    for k in range(i, i + h):
                        a = x[r, k]
                        b = x[r, k + h]
                        x[r, k] = a + b
                        x[r, k + h] = a - b
                h *= 2
        return x

else:  # pragma: no cover
    fwht_rows_numba = None


def fwht_rows(x, backend=None):
    """Dispatch to the selected backend.

    ``backend`` is ``"numba"``, ``"numpy"`` or ``None`` (module default).
    """
    if backend is None:
        backend = "numba" if USE_NUMBA else "numpy"
    if backend == "numba":
        if fwht_rows_numba is None:
            raise RuntimeError("numba backend requested but numba is not importable")
        return fwht_rows_numba(x)
    if backend == "numpy":
        return fwht_rows_numpy(x)
    raise ValueError(f"unknown backend {backend!r}")


def active_backend():
    return "numba" if USE_NUMBA else "numpy"


def set_num_threads(n):
    """Forward a thread count to numba; a no-op on the numpy path.

    The shipped kernels are serial, so this only caps threads numba itself
    may start.  Returns the count in effect.
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"thread count must be >= 1 (got {n})")
    if not USE_NUMBA:
        return n
    n = min(n, numba.config.NUMBA_NUM_THREADS)
    with warnings.catch_warnings():
        # the threading-layer probe warns about old TBB builds it then skips
        warnings.simplefilter("ignore", numba.NumbaWarning)
        numba.set_num_threads(n)
    return n


def as_work_array(v):
    """Copy ``v`` into a fresh C-contiguous float64 2-D work array."""
    a = np.array(v, dtype=np.float64, order="C", copy=True)
    return a.reshape(1, -1) if a.ndim == 1 else a
