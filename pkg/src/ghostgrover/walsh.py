"""Walsh functions, 2-D Walsh-Hadamard masks and the fast transform.

Two normalizations appear throughout the package and are kept apart:

* mask view: entries are exactly +1/-1 (what is displayed and what the
  image synthesis sums over);
* state view: entries are +-1/sqrt(M), so the masks form an orthonormal
  basis of the M-pixel space (used for inner products and probabilities).

Pixel ``(y, x)`` of an ``m x m`` grid has flat index ``y*m + x`` (row-major,
origin top-left).  Mask ``j = u*m + v`` is the outer product ``W_u (x) W_v``,
so its array is ``values[y, x] = W_u(y) * W_v(x)``.  With this convention the
flattened natural-order masks are exactly the rows of the Sylvester matrix
``H_m (x) H_m``, which is what lets a single length-M transform do all the
synthesis and analysis work.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _accel
from .errors import InvalidArgumentError


class WalshOrdering(str, Enum):
    NATURAL = "natural"
    SEQUENCY = "sequency"


def _ordering(ordering):
    try:
        return WalshOrdering(ordering)
    except ValueError:
        raise InvalidArgumentError(
            f"ordering must be 'natural' or 'sequency', got {ordering!r}"
        ) from None


def is_power_of_two(n):
    return isinstance(n, (int, np.integer)) and n >= 1 and (n & (n - 1)) == 0


def check_side(m, name="m"):
    if isinstance(m, bool) or not is_power_of_two(m):
        raise InvalidArgumentError(f"{name} must be a power of two (got {m!r})")
    return int(m)


def _parity(a):
    """Parity of the popcount of each entry of a non-negative int array."""
    a = np.asarray(a, dtype=np.int64).copy()
    out = np.zeros_like(a)
    while np.any(a):
        out ^= a & 1
        a >>= 1
    return out


def _bit_reverse(i, bits):
    r = 0
    for _ in range(bits):
        r = (r << 1) | (i & 1)
        i >>= 1
    return r


def sequency_permutation(m):
    """Return ``perm`` with ``perm[s]`` the natural index of sequency index ``s``.

    The natural row with index ``bitrev(gray(s))`` has exactly ``s`` sign
    changes.
    """
    m = check_side(m)
    bits = m.bit_length() - 1
    return np.array([_bit_reverse(s ^ (s >> 1), bits) for s in range(m)], dtype=np.int64)


def natural_index_map(m, ordering="natural"):
    """Map from 2-D mask index ``j`` (in ``ordering``) to natural flat index."""
    m = check_side(m)
    if _ordering(ordering) is WalshOrdering.NATURAL:
        return np.arange(m * m, dtype=np.int64)
    perm = sequency_permutation(m)
    return (perm[:, None] * m + perm[None, :]).ravel()


def walsh_1d(u, m, ordering="natural"):
    """The ``u``-th Walsh function sampled on ``m`` points, entries +-1.

    Parameters
    ----------
    u : int
        Function index, ``0 <= u < m``.  Under sequency ordering ``u`` is the
        number of sign changes.
    m : int
        Number of samples, a power of two.
    ordering : {"natural", "sequency"}
    """
    m = check_side(m)
    if not 0 <= u < m:
        raise InvalidArgumentError(f"u must satisfy 0 <= u < {m} (got {u})")
    if _ordering(ordering) is WalshOrdering.SEQUENCY:
        u = int(sequency_permutation(m)[u])
    x = np.arange(m)
    return 1.0 - 2.0 * _parity(x & u)


@dataclass(frozen=True)
class WalshMask:
    """Mask-view Walsh-Hadamard pattern: an ``m x m`` grid of +-1."""

    m: int
    j: int
    values: np.ndarray
    ordering: WalshOrdering = WalshOrdering.NATURAL


@dataclass(frozen=True)
class SuperpositionMask:
    """``(h_0 - h_j) / sqrt(2)`` in mask view; entries are 0 or sqrt(2)."""

    m: int
    j: int
    values: np.ndarray
    ordering: WalshOrdering = WalshOrdering.NATURAL


def _check_index(j, m):
    if not 0 <= j < m * m:
        raise InvalidArgumentError(f"mask index must satisfy 0 <= j < {m * m} (got {j})")


def mask_2d(j, m, ordering="natural"):
    m = check_side(m)
    _check_index(j, m)
    order = _ordering(ordering)
    u, v = divmod(int(j), m)
    values = np.outer(walsh_1d(u, m, order), walsh_1d(v, m, order))
    values.flags.writeable = False
    return WalshMask(m, int(j), values, order)


def superposition_mask(j, m, ordering="natural"):
    h0 = mask_2d(0, m, ordering).values
    hj = mask_2d(j, m, ordering).values
    values = (h0 - hj) / np.sqrt(2.0)
    values.flags.writeable = False
    return SuperpositionMask(int(m), int(j), values, _ordering(ordering))


def hadamard_matrix(n):
    """Dense natural-order Sylvester Hadamard matrix (+-1 entries).

    Built by repeated Kronecker products; O(n^2) memory.  This is the naive
    reference the fast transform is checked against.
    """
    n = check_side(n, "length")
    h = np.ones((1, 1))
    h2 = np.array([[1.0, 1.0], [1.0, -1.0]])
    while h.shape[0] < n:
        h = np.kron(h, h2)
    return h


def fwht(v, backend=None):
    """Unnormalized natural-order Walsh-Hadamard transform ``H @ v``.

    ``v`` may be 1-D (length M) or 2-D (transform applied to each row).  No
    ``1/sqrt(M)`` factor is applied, so ``fwht(fwht(v)) == M * v``.
    """
    arr = np.asarray(v)
    if arr.ndim not in (1, 2):
        raise InvalidArgumentError("fwht expects a 1-D vector or a 2-D batch of rows")
    check_side(arr.shape[-1], "length")
    work = _accel.as_work_array(arr)
    _accel.fwht_rows(work, backend)
    return work.reshape(arr.shape)


def fwht_naive(v):
    arr = np.asarray(v, dtype=np.float64)
    return arr @ hadamard_matrix(arr.shape[-1]).T


def render_superpixel(mask, screen):
    """Replicate every logical pixel into a ``(screen // m)``-square block.

    ``mask`` is a :class:`WalshMask`, :class:`SuperpositionMask` or a square
    array.
    """
    values = np.asarray(getattr(mask, "values", mask))
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise InvalidArgumentError("mask must be a square 2-D grid")
    m = values.shape[0]
    if screen < m or screen % m:
        raise InvalidArgumentError(f"screen size {screen} is not a multiple of m={m}")
    s = screen // m
    return np.repeat(np.repeat(values, s, axis=0), s, axis=1)


def superpixel_size(m, screen):
    """Side of one super-pixel when an ``m``-grid spans ``screen`` pixels.

    Exact when ``m`` divides ``screen``.  Otherwise the size is rounded up,
    which is what a display needs to cover the screen (960 px at m=128 gives
    8, with the outer rows/columns falling off the panel).  Rendering still
    requires an exact multiple.
    """
    check_side(m)
    if screen < m:
        raise InvalidArgumentError(f"screen size {screen} is smaller than m={m}")
    return -(-screen // m)


def block_downsample(img, m):
    """Average ``img`` over ``m x m`` equal blocks (inverse of rendering)."""
    img = np.asarray(img, dtype=np.float64)
    s = img.shape[0] // m
    if s * m != img.shape[0] or img.shape[0] != img.shape[1]:
        raise InvalidArgumentError("image side must be a multiple of m")
    return img.reshape(m, s, m, s).mean(axis=(1, 3))
