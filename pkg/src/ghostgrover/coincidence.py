"""Coincidence counting with Poisson statistics and accidental subtraction.

Signal normalization: ``p_j / max(p)`` is taken as the relative projection
efficiency of mask ``j``, so ``pair_rate`` is the true coincidence rate of the
brightest mask.  Accidentals use the standard ``S_A S_B tau / T`` estimator.
Mask ``j`` draws from its own generator seeded with ``(seed, j)``.
"""

from dataclasses import dataclass, field, asdict
import math

import numpy as np

from .errors import InvalidArgumentError, InvalidStateError
from .ghost import decompose, reconstruct
from .grover import ProbabilityVector

SIGNAL_NORMALIZATION = "max"


@dataclass(frozen=True)
class NoiseParams:
    pair_rate: float = 5.0e4
    singles_rate_a: float = 1.0e5
    singles_rate_b: float = 1.0e5
    gate: float = 3e-9
    integration: float = 2.0
    seed: int = 0

    def __post_init__(self):
        for name in ("pair_rate", "singles_rate_a", "singles_rate_b"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise InvalidArgumentError(f"{name} must be a finite rate >= 0 (got {v!r})")
        if not self.gate > 0:
            raise InvalidArgumentError(f"gate must be > 0 (got {self.gate!r})")
        if not self.integration > 0:
            raise InvalidArgumentError(f"integration must be > 0 (got {self.integration!r})")
        if int(self.seed) != self.seed or self.seed < 0:
            raise InvalidArgumentError(f"seed must be a nonnegative integer (got {self.seed!r})")

    @property
    def accidental_mean(self):
        """Expected accidental coincidences per mask, ``R_A R_B tau T``."""
        return self.singles_rate_a * self.singles_rate_b * self.gate * self.integration

    def replace(self, **kw):
        d = asdict(self)
        d.update(kw)
        return NoiseParams(**d)


@dataclass(frozen=True)
class CoincidenceCounts:
    j: np.ndarray
    coincidences: np.ndarray
    singles_a: np.ndarray
    singles_b: np.ndarray
    accidentals_est: np.ndarray
    corrected: np.ndarray
    clamped: np.ndarray
    params: NoiseParams
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return self.j.size

    def rows(self):
        for k in range(self.j.size):
            yield (int(self.j[k]), int(self.coincidences[k]), int(self.singles_a[k]),
                   int(self.singles_b[k]), float(self.accidentals_est[k]),
                   float(self.corrected[k]), int(self.clamped[k]))


def _probs(p):
    if isinstance(p, ProbabilityVector):
        return p.p, p.convention
    return np.asarray(p, dtype=np.float64).ravel(), None


def signal_means(p, params):
    """Expected true coincidences per mask, ``pair_rate T p_j / max(p)``."""
    p, _ = _probs(p)
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise InvalidArgumentError("probabilities must be finite and nonnegative")
    pmax = float(p.max()) if p.size else 0.0
    if pmax == 0:
        return np.zeros_like(p)
    return params.pair_rate * params.integration * p / pmax


def pair_rate_for_total(p, total, integration=2.0):
    """Pair rate giving ``total`` expected true coincidences summed over masks."""
    p, _ = _probs(p)
    rel = p.sum() / p.max()
    return float(total / (integration * rel))


def simulate_counts(p, params):
    """Draw coincidences and singles for every mask.

    ``coincidences_j ~ Poisson(signal_j + R_A R_B tau T)`` and
    ``singles ~ Poisson(R T)``; ``accidentals_est = S_A S_B tau / T``.
    """
    probs, convention = _probs(p)
    sig = signal_means(probs, params)
    acc_mean = params.accidental_mean
    T = params.integration
    n = probs.size
    coinc = np.empty(n, dtype=np.int64)
    sa = np.empty(n, dtype=np.int64)
    sb = np.empty(n, dtype=np.int64)
    seed = int(params.seed)
    for j in range(n):
        rng = np.random.default_rng([seed, j])
        coinc[j] = rng.poisson(sig[j] + acc_mean)
        sa[j] = rng.poisson(params.singles_rate_a * T)
        sb[j] = rng.poisson(params.singles_rate_b * T)
    acc = sa.astype(np.float64) * sb.astype(np.float64) * params.gate / T
    corrected = coinc - acc
    meta = {"convention": convention, "signal_normalization": SIGNAL_NORMALIZATION,
            "expected_signal_total": float(sig.sum()),
            "expected_accidentals_per_mask": acc_mean}
    return CoincidenceCounts(np.arange(n), coinc, sa, sb, acc, corrected,
                             corrected < 0, params, meta)


def estimate_probabilities(counts, subtract_accidentals=True, convention="paper"):
    """Normalized estimate ``max(corrected, 0) / sum(max(corrected, 0))``.

    With ``subtract_accidentals=False`` the raw coincidences are used.  The
    returned vector carries a per-mask ``clamped`` flag.
    """
    if subtract_accidentals:
        raw = np.asarray(counts.corrected, dtype=np.float64)
    else:
        raw = np.asarray(counts.coincidences, dtype=np.float64)
    clamped = raw < 0
    pos = np.where(clamped, 0.0, raw)
    total = pos.sum()
    if not total > 0:
        raise InvalidStateError("all corrected counts are zero; nothing to normalize")
    conv = counts.meta.get("convention") or convention
    return ProbabilityVector(pos / total, conv, clamped=clamped, basis="estimated")


def pearson(a, b):
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    a = a - a.mean()
    b = b - b.mean()
    den = np.linalg.norm(a) * np.linalg.norm(b)
    return float(a @ b / den) if den > 0 else 0.0


@dataclass
class NoisyReconstruction:
    ideal: object
    noisy_total: np.ndarray
    estimate: ProbabilityVector
    counts: CoincidenceCounts
    correlation: float


def noisy_reconstruct(idler, convention, params, subtract_accidentals=True):
    """Ideal decomposition, simulated counts, estimated probabilities, noisy image.

    ``correlation`` is the Pearson correlation between the noisy and the
    ideal total images.
    """
    ideal = decompose(idler, convention)
    counts = simulate_counts(ideal.probabilities, params)
    est = estimate_probabilities(counts, subtract_accidentals)
    noisy = reconstruct(est, ideal.m)
    return NoisyReconstruction(ideal, noisy, est, counts, pearson(noisy, ideal.total))
