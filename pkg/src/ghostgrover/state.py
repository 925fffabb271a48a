"""Bi-photon Schmidt states, oracle objects and the heralded idler state."""

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

from .errors import InvalidArgumentError, InvalidStateError, ObjectParseError

NORM_TOL = 1e-9
LETTER_G_SIDES = (32, 64, 128)
BUILTIN_OBJECTS = ("letter-G", "block", "two-points", "point", "empty")


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class SchmidtState:
    """Nonnegative Schmidt amplitudes ``lam[y, x]`` over an ``m x m`` pixel grid.

    ``meta`` records how the state was built (profile kind, block side or
    waist, placement/center).
    """

    lam: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        lam = _frozen(self.lam, np.float64)
        if lam.ndim != 2 or lam.shape[0] != lam.shape[1]:
            raise InvalidArgumentError("Schmidt amplitudes must form a square grid")
        if not np.all(np.isfinite(lam)) or np.any(lam < 0):
            raise InvalidStateError("Schmidt amplitudes must be finite and nonnegative")
        object.__setattr__(self, "lam", lam)

    @property
    def m(self):
        return self.lam.shape[0]

    @property
    def norm(self):
        return float(np.sqrt(np.sum(self.lam**2)))

    def is_normalized(self, tol=NORM_TOL):
        return abs(float(np.sum(self.lam**2)) - 1.0) <= tol


@dataclass(frozen=True)
class OracleObject:
    """Binary mark grid; marked pixels receive a pi phase."""

    marks: np.ndarray

    def __post_init__(self):
        marks = np.asarray(self.marks)
        if marks.ndim != 2 or marks.shape[0] != marks.shape[1]:
            raise InvalidArgumentError("object marks must form a square grid")
        if not np.all((marks == 0) | (marks == 1)):
            raise InvalidArgumentError("object marks must be 0 or 1")
        object.__setattr__(self, "marks", _frozen(marks, bool))

    @property
    def m(self):
        return self.marks.shape[0]

    @property
    def count(self):
        return int(self.marks.sum())

    @property
    def signs(self):
        """``(-1)**f(j)`` as a float grid."""
        return np.where(self.marks, -1.0, 1.0)


@dataclass(frozen=True)
class IdlerState:
    """Signed idler amplitudes ``lam_j * (-1)**f(j)`` after heralding."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amplitudes, np.float64)
        if amps.ndim != 2 or amps.shape[0] != amps.shape[1]:
            raise InvalidArgumentError("idler amplitudes must form a square grid")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def m(self):
        return self.amplitudes.shape[0]

    @property
    def vector(self):
        """Row-major flattening (a length-M state vector)."""
        return self.amplitudes.ravel()


def _check_m(m):
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)) or m < 1:
        raise InvalidArgumentError(f"m must be a positive integer (got {m!r})")
    return int(m)


def block_origin(m, n, placement="auto"):
    """Top-left corner (same for both axes) of an ``n x n`` database block."""
    if placement == "auto":
        placement = "centered" if (m - n) % 2 == 0 else "origin"
    if placement == "origin":
        return 0, "origin"
    if placement == "centered":
        if (m - n) % 2:
            raise InvalidArgumentError(
                f"centered placement needs m - n even (m={m}, n={n})"
            )
        return (m - n) // 2, "centered"
    raise InvalidArgumentError(f"unknown placement {placement!r}")


def uniform_block_profile(m, n, placement="auto"):
    """Flat amplitudes ``1/n`` on an ``n x n`` block, zero elsewhere.

    ``placement`` is ``"centered"``, ``"origin"`` or ``"auto"`` (centered when
    ``m - n`` is even, origin-aligned otherwise).
    """
    m = _check_m(m)
    n = _check_m(n)
    if n > m:
        raise InvalidArgumentError(f"block side n={n} exceeds m={m}")
    start, placement = block_origin(m, n, placement)
    lam = np.zeros((m, m))
    lam[start:start + n, start:start + n] = 1.0 / n
    return SchmidtState(lam, {"kind": "uniform", "n": n, "placement": placement,
                              "start": start})


def gaussian_profile(m, waist, center=None):
    """Gaussian amplitudes ``exp(-r^2 / waist^2)``, normalized.

    ``waist`` is the 1/e^2 intensity radius in pixels (the intensity
    ``lam^2`` falls as ``exp(-2 r^2 / waist^2)``).  ``center`` is ``(x0, y0)``
    in pixel coordinates and defaults to the grid center ``((m-1)/2, (m-1)/2)``.
    """
    m = _check_m(m)
    if not np.isfinite(waist) or waist <= 0:
        raise InvalidArgumentError(f"waist must be positive (got {waist!r})")
    if center is None:
        center = ((m - 1) / 2.0, (m - 1) / 2.0)
    x0, y0 = float(center[0]), float(center[1])
    y, x = np.indices((m, m), dtype=np.float64)
    r2 = (x - x0) ** 2 + (y - y0) ** 2
    # shift by the minimum so the peak never underflows
    lam = np.exp(-(r2 - r2.min()) / waist**2)
    lam /= np.sqrt(np.sum(lam**2))
    return SchmidtState(lam, {"kind": "gaussian", "waist": float(waist),
                              "center": [x0, y0]})


def schmidt_number(state):
    """Participation ratio ``K = 1 / sum(lam^4)`` of a normalized state."""
    if not state.is_normalized():
        raise InvalidStateError(
            f"schmidt_number needs a normalized state (norm^2={state.norm**2!r})"
        )
    return float(1.0 / np.sum(state.lam**4))


def calibrate_waist(m, target=549.0, center=None):
    """Waist whose Gaussian profile on an ``m x m`` grid has Schmidt number ``target``.

    ``K`` grows monotonically from 1 (vanishing waist) towards ``m*m`` (flat
    limit), so a bracketing root-find suffices.
    """
    m = _check_m(m)
    if not 1.0 < target < m * m:
        raise InvalidArgumentError(f"target Schmidt number must lie in (1, {m * m})")

    def gap(w):
        return schmidt_number(gaussian_profile(m, w, center)) - target

    lo, hi = 0.05, 2.0 * m
    while gap(hi) < 0:
        hi *= 4.0
        if hi > 1e9:
            raise InvalidArgumentError("target Schmidt number is not reachable")
    return float(brentq(gap, lo, hi, xtol=1e-12, rtol=1e-12))


def effective_block_side(state):
    """Equivalent database side ``n_eff = 2 * sqrt(omega)`` of an intensity profile.

    ``omega`` is the squared second-moment radius of ``lam^2`` about its
    centroid, ``omega = 4 * sigma^2`` with ``sigma^2`` the per-axis variance
    averaged over the two axes.  ``n_eff`` is thus the 4-sigma (D4sigma)
    width: ``2 * waist`` for a Gaussian and ``2/sqrt(3) * n`` for a wide
    uniform block.
    """
    inten = np.asarray(state.lam, dtype=np.float64) ** 2
    total = inten.sum()
    if total <= 0:
        raise InvalidStateError("effective_block_side of a zero state")
    y, x = np.indices(inten.shape, dtype=np.float64)
    cx = (inten * x).sum() / total
    cy = (inten * y).sum() / total
    var_x = (inten * (x - cx) ** 2).sum() / total
    var_y = (inten * (y - cy) ** 2).sum() / total
    omega = 4.0 * 0.5 * (var_x + var_y)
    return float(2.0 * np.sqrt(omega))


def centroid(state):
    inten = state.lam**2
    y, x = np.indices(inten.shape, dtype=np.float64)
    t = inten.sum()
    return float((inten * x).sum() / t), float((inten * y).sum() / t)


# -- objects -----------------------------------------------------------------

def point_object(m, y, x):
    marks = np.zeros((m, m), dtype=bool)
    marks[y, x] = True
    return OracleObject(marks)


def builtin_object(name, m):
    """One of the shipped objects.

    ``letter-G`` exists for m in 32, 64, 128.  ``block`` is a centered square
    of side ``max(1, m // 4)``; ``two-points`` marks ``(m/2-1, m/2-1)`` and
    ``(m/2, m/2)``; ``point`` marks the single pixel ``(m//2, m//2)``.
    """
    m = _check_m(m)
    marks = np.zeros((m, m), dtype=bool)
    if name == "empty":
        pass
    elif name == "point":
        marks[m // 2, m // 2] = True
    elif name == "two-points":
        if m < 2:
            raise InvalidArgumentError("two-points needs m >= 2")
        marks[m // 2 - 1, m // 2 - 1] = True
        marks[m // 2, m // 2] = True
    elif name == "block":
        s = max(1, m // 4)
        a = (m - s) // 2
        marks[a:a + s, a:a + s] = True
    elif name == "letter-G":
        if m not in LETTER_G_SIDES:
            raise InvalidArgumentError(
                f"letter-G raster ships for m in {LETTER_G_SIDES} only (got {m})"
            )
        text = resources.files("ghostgrover.data").joinpath(f"letter_g_{m}.txt").read_text()
        return parse_ascii_object(text, m=m, path=f"<letter_g_{m}>")
    else:
        raise InvalidArgumentError(
            f"unknown builtin object {name!r}; choose from {', '.join(BUILTIN_OBJECTS)}"
        )
    return OracleObject(marks)


def parse_ascii_object(text, m=None, path=None):
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.rstrip("\r")
        if line.startswith("#"):
            continue
        if not line.strip():
            if rows:
                # trailing blank lines are allowed, interior ones are not
                rows.append((lineno, None))
            continue
        for col, ch in enumerate(line, start=1):
            if ch not in "01":
                raise ObjectParseError(f"invalid character {ch!r}", path, lineno, col)
        rows.append((lineno, line))
    while rows and rows[-1][1] is None:
        rows.pop()
    for lineno, line in rows:
        if line is None:
            raise ObjectParseError("blank line inside raster", path, lineno)
    if not rows:
        raise ObjectParseError("empty object file", path)
    side = len(rows)
    for lineno, line in rows:
        if len(line) != side:
            raise ObjectParseError(
                f"expected {side} columns, found {len(line)}", path, lineno
            )
    if m is not None and side != m:
        raise ObjectParseError(f"object is {side}x{side}, expected {m}x{m}", path)
    marks = np.array([[c == "1" for c in line] for _, line in rows], dtype=bool)
    return OracleObject(marks)


def load_object(path, m=None):
    """Read an ASCII 0/1 raster or a PGM (P2/P5; nonzero pixels are marked)."""
    from .fileio import read_pgm

    path = Path(path)
    data = path.read_bytes()
    if data[:2] in (b"P2", b"P5"):
        try:
            img = read_pgm(path)
        except ValueError as exc:
            raise ObjectParseError(str(exc), path) from None
        if img.shape[0] != img.shape[1]:
            raise ObjectParseError(f"object must be square, got {img.shape}", path)
        if m is not None and img.shape[0] != m:
            raise ObjectParseError(f"object is {img.shape[0]}x{img.shape[0]}, expected {m}x{m}", path)
        return OracleObject(img != 0)
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError:
        raise ObjectParseError("object file is neither ASCII nor PGM", path) from None
    return parse_ascii_object(text, m=m, path=path)


def apply_oracle(state, obj):
    """Herald the idler: ``o'_j = lam_j * (-1)**f(j)``."""
    if state.m != obj.m:
        raise InvalidArgumentError(f"state is {state.m}x{state.m} but object is {obj.m}x{obj.m}")
    return IdlerState(state.lam * obj.signs)
