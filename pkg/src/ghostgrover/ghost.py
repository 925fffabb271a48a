"""Ghost-imaging measurement in the superposition basis and image synthesis.

The idler is projected onto ``q_j = (h_0 - h_j)/sqrt(2)``.  The image is
``sum_j p_j h_j`` with mask-view (+-1) masks, evaluated with one fast
transform.  Expanding ``p_j = w (c - o~_j)^2`` splits the image into

* ``delta_part  = w c^2 sum_j h_j``        (a spike at the origin pixel),
* ``s_part      = w sum_j o~_j^2 h_j``     (transform of the power spectrum),
* ``object_part = -2 w c sum_j o~_j h_j``  (= -2 w c sqrt(M) o', the inverted object),

with ``w = 1`` under ``convention="paper"`` (``c = sum(o')/M``) and ``w = 1/2``
under the physical convention (``c = o~_0``).
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import InvalidArgumentError, ResourceError
from .grover import CONVENTIONS, ProbabilityVector
from .state import (
    SchmidtState,
    apply_oracle,
    block_origin,
    gaussian_profile,
    point_object,
    uniform_block_profile,
)
from .walsh import check_side, fwht, natural_index_map


def _check_convention(convention):
    if convention not in CONVENTIONS:
        raise InvalidArgumentError(
            f"convention must be 'paper' or 'physical' (got {convention!r})"
        )
    return convention


@dataclass(frozen=True)
class GhostSpectrum:
    """State-view Hadamard coefficients ``o~_j`` of the idler and the reference level."""

    m: int
    o_tilde: np.ndarray
    mean_term: float
    convention: str
    ordering: str = "natural"


def ghost_spectrum(idler, convention="paper", ordering="natural"):
    _check_convention(convention)
    m = check_side(idler.m)
    M = m * m
    o = idler.vector
    ot_nat = fwht(o) / math.sqrt(M)
    if convention == "paper":
        c = float(o.sum() / M)
    else:
        c = float(ot_nat[0])
    ot = ot_nat[natural_index_map(m, ordering)]
    return GhostSpectrum(m, ot, c, convention, str(getattr(ordering, "value", ordering)))


def _weight(convention):
    return 1.0 if convention == "paper" else 0.5


def ghost_probabilities(idler, convention="paper", ordering="natural"):
    """Outcome probabilities for the superposition masks.

    ``paper``: ``(<o'> - o~_j)^2`` with ``<o'> = sum(o')/M``.
    ``physical``: ``|<q_j|psi>|^2 = (o~_0 - o~_j)^2 / 2``, so ``p_0 = 0``.
    """
    spec = ghost_spectrum(idler, convention, ordering)
    p = _weight(convention) * (spec.mean_term - spec.o_tilde) ** 2
    return ProbabilityVector(p, convention, spec.m, basis="superposition")


def _coeffs(p):
    if isinstance(p, ProbabilityVector):
        return p.p
    return np.asarray(p, dtype=np.float64).ravel()


def reconstruct(p, m=None, ordering="natural"):
    """Synthesize ``sum_j p_j h_j(y, x)`` via one inverse fast transform."""
    coeffs = _coeffs(p)
    if m is None:
        m = math.isqrt(coeffs.size)
    m = check_side(m)
    if coeffs.size != m * m:
        raise InvalidArgumentError(f"expected {m * m} coefficients, got {coeffs.size}")
    nat = np.empty_like(coeffs)
    nat[natural_index_map(m, ordering)] = coeffs
    return fwht(nat).reshape(m, m)


@dataclass(frozen=True)
class ReconstructedImage:
    m: int
    total: np.ndarray
    delta_part: np.ndarray
    s_part: np.ndarray
    object_part: np.ndarray
    convention: str
    mean_term: float
    probabilities: ProbabilityVector | None = None

    @property
    def residual(self):
        """Max-abs gap between ``total`` and the sum of the three parts."""
        return float(np.max(np.abs(self.total - (self.delta_part + self.s_part + self.object_part))))


def decompose(idler, convention="paper"):
    spec = ghost_spectrum(idler, convention)
    m, M = spec.m, spec.m**2
    w = _weight(convention)
    c = spec.mean_term
    ot = spec.o_tilde
    delta = fwht(np.full(M, w * c * c)).reshape(m, m)
    s = fwht(w * ot**2).reshape(m, m)
    obj = fwht(-2.0 * w * c * ot).reshape(m, m)
    probs = ghost_probabilities(idler, convention)
    total = reconstruct(probs, m)
    img = ReconstructedImage(m, total, delta, s, obj, convention, c, probs)
    scale = max(1.0, float(np.max(np.abs(total))))
    if img.residual > 1e-9 * scale:
        raise RuntimeError(f"decomposition identity violated (residual {img.residual:.3e})")
    return img


# -- overlap and sweeps -------------------------------------------------------

@dataclass
class OverlapReport:
    m: int
    overlap: float
    profile: str = ""
    n: int | None = None
    waist: float | None = None
    placement: str | None = None


def overlap_value(a, b):
    """``|<a, b>| / (|a| |b|)``, defined as 0 if either norm vanishes."""
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        return 0.0
    return float(min(1.0, abs(a @ b) / (na * nb)))


def overlap(img, state=None):
    """Normalized overlap between the object term and the power-spectrum term."""
    meta = state.meta if state is not None else {}
    return OverlapReport(
        img.m,
        overlap_value(img.object_part, img.s_part),
        meta.get("kind", ""),
        meta.get("n"),
        meta.get("waist"),
        meta.get("placement"),
    )


def database_center(state):
    """Pixel ``(y, x)`` used as the default single mark for a profile."""
    m = state.m
    if state.meta.get("kind") == "uniform":
        start, n = state.meta["start"], state.meta["n"]
        c = start + n // 2
        return c, c
    return m // 2, m // 2


def default_sweep_object(state):
    y, x = database_center(state)
    return point_object(state.m, y, x)


@dataclass
class SweepResult:
    """Overlap grid; rows follow ``m_list``, columns ``sizes`` (n or waist).

    Cells that do not exist (``n > m`` or a placement that cannot be
    realized) hold NaN.
    """

    profile: str
    m_list: list
    sizes: list
    values: np.ndarray
    reports: list = field(default_factory=list)
    placement: str = ""

    def rows(self):
        for i, m in enumerate(self.m_list):
            for k, size in enumerate(self.sizes):
                yield m, size, float(self.values[i, k])


def sweep_overlap(m_list, sizes, profile="uniform", placement="centered",
                  object_rule=None, convention="paper", max_side=512):
    """Overlap between object and power-spectrum terms over a parameter grid.

    ``sizes`` are block sides for ``profile="uniform"`` and waists (pixels)
    for ``profile="gaussian"``.  ``object_rule(state) -> OracleObject``
    defaults to a single mark at the database center.
    """
    if profile not in ("uniform", "gaussian"):
        raise InvalidArgumentError(f"profile must be uniform or gaussian (got {profile!r})")
    rule = object_rule or default_sweep_object
    m_list = [check_side(int(m)) for m in m_list]
    for m in m_list:
        if m > max_side:
            raise ResourceError(f"m={m} exceeds the sweep cap of {max_side}")
    values = np.full((len(m_list), len(sizes)), np.nan)
    reports = []
    for i, m in enumerate(m_list):
        for k, size in enumerate(sizes):
            if profile == "uniform":
                n = int(size)
                if n < 1 or n > m:
                    continue
                try:
                    block_origin(m, n, placement)
                except InvalidArgumentError:
                    continue
                state = uniform_block_profile(m, n, placement)
            else:
                state = gaussian_profile(m, float(size))
            img = decompose(apply_oracle(state, rule(state)), convention)
            rep = overlap(img, state)
            values[i, k] = rep.overlap
            reports.append(rep)
    return SweepResult(profile, list(m_list), list(sizes), values, reports, placement)


# -- mark detection ------------------------------------------------------------

@dataclass
class MarkDetectionReport:
    min_marked: float
    max_unmarked: float
    verdict: bool
    n_marked: int
    n_unmarked_supported: int
    support_threshold: float
    note: str = ""


def mark_detection_report(img, obj, support, threshold=0.05):
    """Check the contrast rule ``min(marked) > 0 > max(unmarked in support)``.

    The origin pixel (where the delta spike lives) is excluded.  ``support``
    is the generating :class:`SchmidtState`; a pixel is in the support when
    its amplitude is at least ``threshold`` times the peak amplitude.
    """
    total = np.asarray(getattr(img, "total", img), dtype=np.float64)
    lam = support.lam if isinstance(support, SchmidtState) else np.asarray(support)
    keep = np.ones(total.shape, dtype=bool)
    keep[0, 0] = False
    marked = obj.marks & keep
    supported = (lam >= threshold * lam.max()) & keep & ~obj.marks
    n_marked = int(marked.sum())
    n_unmarked = int(supported.sum())
    min_marked = float(total[marked].min()) if n_marked else math.nan
    max_unmarked = float(total[supported].max()) if n_unmarked else math.nan
    note = ""
    if not n_marked:
        note = "no marked pixels: contrast undefined"
        verdict = False
    elif not n_unmarked:
        note = "no unmarked pixels inside the support"
        verdict = min_marked > 0
    else:
        verdict = min_marked > 0 > max_unmarked
    return MarkDetectionReport(min_marked, max_unmarked, bool(verdict), n_marked,
                               n_unmarked, float(threshold), note)
