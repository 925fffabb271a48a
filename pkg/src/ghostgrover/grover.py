"""Grover diffusion, single-shot detection probabilities and iterated search.

State vectors are plain 1-D float arrays of length M (row-major pixel
order).  Two averages are kept distinct:

* ``amplitude_mean(v) = sum(v) / M`` -- the level the diffusion reflects about;
* ``h0_overlap(v) = <h0|v> = sum(v) / sqrt(M)`` -- the inner product with the
  uniform superposition.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import InvalidArgumentError, ResourceError
from .state import IdlerState

CONVENTIONS = ("paper", "physical")


@dataclass(frozen=True)
class ProbabilityVector:
    """Per-outcome detection probabilities over M outcomes.

    ``convention`` is ``"paper"`` (values as the closed forms print them,
    not renormalized) or ``"physical"`` (true Born probabilities of each
    projector).  ``clamped`` optionally flags entries that were clipped at
    zero during estimation from counts.
    """

    p: np.ndarray
    convention: str = "physical"
    m: int | None = None
    clamped: np.ndarray | None = None
    basis: str = ""

    def __post_init__(self):
        p = np.array(self.p, dtype=np.float64, copy=True).ravel()
        p.flags.writeable = False
        object.__setattr__(self, "p", p)
        if self.convention not in CONVENTIONS:
            raise InvalidArgumentError(f"convention must be one of {CONVENTIONS}")
        if self.m is None:
            side = math.isqrt(p.size)
            object.__setattr__(self, "m", side if side * side == p.size else None)

    def __len__(self):
        return self.p.size


def amplitude_mean(v):
    v = np.asarray(v, dtype=np.float64)
    return float(v.sum() / v.size)


def h0_overlap(v):
    v = np.asarray(v, dtype=np.float64)
    return float(v.sum() / math.sqrt(v.size))


def diffusion_apply(v):
    """``D v = 2 |h0><h0|v> - v``: every amplitude reflected about the mean."""
    v = np.asarray(v, dtype=np.float64)
    return 2.0 * amplitude_mean(v) - v


def diffusion_matrix(M):
    """Dense ``2|h0><h0| - I`` (for cross-checks at small M)."""
    return np.full((M, M), 2.0 / M) - np.eye(M)


def _idler_vector(idler):
    if isinstance(idler, IdlerState):
        return idler.vector
    return np.asarray(idler, dtype=np.float64).ravel()


def grover_probabilities(idler):
    """Single-iteration Grover detection probabilities ``|2<o'> - o'_j|^2``."""
    o = _idler_vector(idler)
    p = (2.0 * amplitude_mean(o) - o) ** 2
    return ProbabilityVector(p, "physical", basis="grover")


def absorbed_basis_probabilities(idler):
    """Same probabilities computed on the measurement side.

    Each outcome projects the undiffused idler onto ``D|j> = (2/sqrt(M))|h0> - |j>``.
    """
    psi = _idler_vector(idler)
    M = psi.size
    h0 = np.full(M, 1.0 / math.sqrt(M))
    amp = (2.0 / math.sqrt(M)) * float(h0 @ psi) - psi
    return ProbabilityVector(amp**2, "physical", basis="grover")


def grover_iterate(state, obj, k):
    """Return ``(D O)^k`` applied to the lambda-weighted start vector.

    For a uniform state over all M pixels the start vector is ``h0`` and the
    textbook amplitude-amplification law holds.
    """
    if k < 0:
        raise InvalidArgumentError(f"iteration count must be >= 0 (got {k})")
    if state.m != obj.m:
        raise InvalidArgumentError("state and object sizes differ")
    v = state.lam.ravel().copy()
    signs = obj.signs.ravel()
    for _ in range(int(k)):
        v *= signs
        v = 2.0 * v.mean() - v
    return v


def success_probability(v, obj):
    v = np.asarray(v).ravel()
    return float(np.sum(v[obj.marks.ravel()] ** 2))


def grover_angle(M, t):
    return math.asin(math.sqrt(t / M))


def theoretical_success(M, t, k):
    """``sin^2((2k+1) theta)`` with ``sin^2 theta = t / M``."""
    return math.sin((2 * k + 1) * grover_angle(M, t)) ** 2


def optimal_iterations(M, t):
    """``round(pi / (4 theta) - 1/2)``, clamped at zero.

    Python's ``round`` sends exact halves to the even neighbour; for
    (M=4, t=3) the raw value is 1/4, giving 0.
    """
    if not 1 <= t < M:
        raise InvalidArgumentError(f"need 1 <= t < M (got t={t}, M={M})")
    return max(0, round(math.pi / (4.0 * grover_angle(M, t)) - 0.5))


@dataclass
class CJReport:
    """Joint (tensor) vs sequential probabilities.

    ``constant`` is the least-squares factor c in ``joint ~ c * sequential``;
    ``max_rel_deviation`` is ``max|joint - c*sequential| / max(joint)``.
    ``h0_start_deviation`` repeats the comparison with a sequential run that
    starts from ``h0`` instead of the lambda-weighted vector.
    """

    joint: np.ndarray
    sequential: np.ndarray
    constant: float
    max_abs_deviation: float
    max_rel_deviation: float
    h0_start_deviation: float
    proportional: bool
    meta: dict = field(default_factory=dict)


def _fit(joint, seq):
    denom = float(seq @ seq)
    c = float(joint @ seq) / denom if denom > 0 else 0.0
    dev = float(np.max(np.abs(joint - c * seq)))
    scale = float(np.max(np.abs(joint)))
    rel = dev / scale if scale > 0 else dev
    return c, dev, rel


def cj_equivalence_check(state, obj, max_elements=65536, tol=1e-12):
    """Compare ``O (x) D`` on the pair with ``D . O`` on one photon.

    The joint path builds the M x M two-photon amplitude tensor
    ``T[s, i] = lam_k delta_sk delta_ik``, applies the oracle to the signal
    axis and the diffusion to the idler axis with dense matrices, and projects
    the signal onto ``h0``.  ``max_elements`` caps M^2.
    """
    if state.m != obj.m:
        raise InvalidArgumentError("state and object sizes differ")
    M = state.m**2
    if M * M > max_elements:
        raise ResourceError(
            f"tensor path needs M^2={M * M} elements, cap is {max_elements}"
        )
    lam = state.lam.ravel()
    O = np.diag(obj.signs.ravel())
    D = diffusion_matrix(M)
    T = np.diag(lam)
    T = O @ T @ D.T
    h0 = np.full(M, 1.0 / math.sqrt(M))
    joint = (h0 @ T) ** 2

    seq = (D @ (O @ lam)) ** 2
    seq_h0 = (D @ (O @ h0)) ** 2
    c, dev, rel = _fit(joint, seq)
    _, _, rel_h0 = _fit(joint, seq_h0)
    return CJReport(joint, seq, c, dev, rel, rel_h0, rel <= tol,
                    {"M": M, "marks": obj.count})
