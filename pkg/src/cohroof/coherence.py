"""The l1-norm coherence on states, pure states, and ensembles.

Values are plain nonnegative floats, at most n-1 for normalized states.
Sums of moduli use math.fsum (correctly rounded), so results are exactly
invariant under basis permutations.
"""

from __future__ import annotations

import math

import numpy as np

from .statecore import DensityMatrix, Ensemble, InternalInconsistency, PureState

INCOHERENCE_TOL = 1e-12
PURE_FORM_TOL = 1e-12


def l1_coherence(rho: DensityMatrix) -> float:
    """Sum of the moduli of all off-diagonal entries.

    Homogeneous: for a subnormalized block the value scales with trace_weight.
    """
    mods = np.abs(rho.entries)
    return math.fsum(mods.ravel()) - math.fsum(mods.diagonal())


def pure_l1(psi: PureState) -> float:
    """l1 coherence of a pure state, sum_{i != j} |a_i a_j|.

    Computed twice, pairwise and as (sum|a_i|)^2 - 1; a disagreement beyond
    1e-12 means the amplitudes were not normalized and raises.
    """
    mods = np.abs(psi.amplitudes)
    pairwise = math.fsum(
        2.0 * mods[i] * mods[j] for i in range(len(mods)) for j in range(i + 1, len(mods))
    )
    total = math.fsum(mods)
    closed_form = total * total - 1.0
    if abs(pairwise - closed_form) > PURE_FORM_TOL:
        raise InternalInconsistency(
            "pure_l1 forms disagree: pairwise %.17g vs closed %.17g" % (pairwise, closed_form)
        )
    return pairwise


pure_l1._kernel = ("l1",)  # recognized by roof_optimize for the compiled path


def average_l1(e: Ensemble) -> float:
    """Ensemble average sum(p_k * pure_l1(psi_k)), the roof objective."""
    return math.fsum(p * pure_l1(psi) for p, psi in e.members)


def is_incoherent(rho: DensityMatrix, tol=INCOHERENCE_TOL) -> bool:
    """True iff every off-diagonal modulus is at most tol."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    off = np.abs(rho.entries - np.diag(rho.entries.diagonal()))
    return float(off.max()) <= tol if rho.dim > 1 else True


def coherence_of_assistance(rho: DensityMatrix, cfg=None):
    """Concave-roof (maximize) counterpart of the coherence concurrence.

    Delegates to the ensemble optimizer in maximize mode; the result is a
    certified lower bound on the true maximum, at least l1_coherence(rho).
    """
    import dataclasses

    from .convexroof import RoofConfig, roof_optimize

    if cfg is None:
        cfg = RoofConfig()
    if cfg.direction != "maximize":
        cfg = dataclasses.replace(cfg, direction="maximize")
    return roof_optimize(rho, pure_l1, cfg)
