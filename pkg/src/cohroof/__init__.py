"""Coherence concurrence of density matrices: exact values for qubit and
anti-diagonal structure, convex-roof optimization elsewhere, and the
matching entanglement quantities on Schmidt-correlated lifts."""

from .statecore import (
    DensityMatrix,
    Ensemble,
    InternalInconsistency,
    Isometry,
    NotHermitian,
    NotIsometry,
    NotPositiveSemidefinite,
    PureState,
    StateValidationError,
    TraceMismatch,
    basis_state,
    ensemble_to_state,
    hjw_transform,
    pure_state,
    reconstruction_error,
    spectral_ensemble,
    validate_density,
)
from .coherence import (
    average_l1,
    coherence_of_assistance,
    is_incoherent,
    l1_coherence,
    pure_l1,
)
from .blocks import BlockDecomposition, additive_concurrence, block_split
from .convexroof import RoofConfig, RoofResult, random_isometry, roof_optimize
from .xanalytic import (
    NotXState,
    XPairing,
    concurrence,
    qubit_concurrence,
    xstate_concurrence,
    xstate_pairing,
)
from .entangle import (
    BipartiteState,
    bipartite_state,
    lift_pure,
    negativity,
    negativity_convex_roof_mc,
    negativity_roof_direct,
    partial_transpose,
    pure_state_negativity,
    schmidt_lift,
)
from ._kernels import BACKEND as kernel_backend

__version__ = "0.1.0"

__all__ = [
    "DensityMatrix", "Ensemble", "Isometry", "PureState",
    "StateValidationError", "NotHermitian", "NotPositiveSemidefinite",
    "TraceMismatch", "NotIsometry", "NotXState", "InternalInconsistency",
    "basis_state", "pure_state", "validate_density", "ensemble_to_state",
    "reconstruction_error", "spectral_ensemble", "hjw_transform",
    "l1_coherence", "pure_l1", "average_l1", "is_incoherent",
    "coherence_of_assistance",
    "BlockDecomposition", "block_split", "additive_concurrence",
    "RoofConfig", "RoofResult", "random_isometry", "roof_optimize",
    "XPairing", "xstate_pairing", "qubit_concurrence", "xstate_concurrence",
    "concurrence",
    "BipartiteState", "bipartite_state", "schmidt_lift", "lift_pure",
    "partial_transpose", "negativity", "pure_state_negativity",
    "negativity_convex_roof_mc", "negativity_roof_direct",
    "kernel_backend",
]
