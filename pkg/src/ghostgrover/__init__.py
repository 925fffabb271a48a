"""Quantum ghost imaging recast as Grover search: a desk-scale simulator."""

__version__ = "0.1.0"

from .coincidence import (
    CoincidenceCounts,
    NoiseParams,
    estimate_probabilities,
    noisy_reconstruct,
    simulate_counts,
)
from .ghost import (
    GhostSpectrum,
    OverlapReport,
    ReconstructedImage,
    decompose,
    ghost_probabilities,
    ghost_spectrum,
    mark_detection_report,
    overlap,
    reconstruct,
    sweep_overlap,
)
from .grover import (
    ProbabilityVector,
    absorbed_basis_probabilities,
    cj_equivalence_check,
    diffusion_apply,
    grover_iterate,
    grover_probabilities,
    optimal_iterations,
)
from .state import (
    IdlerState,
    OracleObject,
    SchmidtState,
    apply_oracle,
    builtin_object,
    calibrate_waist,
    effective_block_side,
    gaussian_profile,
    load_object,
    schmidt_number,
    uniform_block_profile,
)
from .walsh import (
    SuperpositionMask,
    WalshMask,
    WalshOrdering,
    fwht,
    mask_2d,
    render_superpixel,
    superposition_mask,
    walsh_1d,
)

__all__ = [
    "absorbed_basis_probabilities",
    "apply_oracle",
    "builtin_object",
    "calibrate_waist",
    "cj_equivalence_check",
    "CoincidenceCounts",
    "decompose",
    "diffusion_apply",
    "effective_block_side",
    "estimate_probabilities",
    "fwht",
    "gaussian_profile",
    "ghost_probabilities",
    "ghost_spectrum",
    "GhostSpectrum",
    "grover_iterate",
    "grover_probabilities",
    "IdlerState",
    "load_object",
    "mark_detection_report",
    "mask_2d",
    "NoiseParams",
    "noisy_reconstruct",
    "optimal_iterations",
    "OracleObject",
    "overlap",
    "OverlapReport",
    "ProbabilityVector",
    "reconstruct",
    "ReconstructedImage",
    "render_superpixel",
    "schmidt_number",
    "SchmidtState",
    "simulate_counts",
    "superposition_mask",
    "SuperpositionMask",
    "sweep_overlap",
    "uniform_block_profile",
    "walsh_1d",
    "WalshMask",
    "WalshOrdering",
]
