"""Closed-form coherence concurrence where the structure allows it.

Qubit states and anti-diagonal (X-patterned) states have an exact value,
2 * sum of the coupling moduli, attained by an explicit two-member
construction per coupled pair. concurrence() is the general entry point:
split into blocks, solve each analytically when possible, fall back to
the numeric roof otherwise, and reassemble additively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .blocks import block_split, additive_concurrence
from .coherence import l1_coherence, pure_l1
from .statecore import (
    DensityMatrix,
    Ensemble,
    PureState,
    StateValidationError,
    basis_state,
    spectral_ensemble,
)

MEMBER_DROP = 1e-14
DEGENERATE_DIAG = 1e-12
XSTATE_TOL = 1e-12


class NotXState(StateValidationError):
    """An off-diagonal entry sits outside the anti-diagonal pattern."""

    def __init__(self, position, modulus):
        self.position = tuple(position)
        self.modulus = float(modulus)
        super().__init__(
            "entry %s has modulus %.3e outside the anti-diagonal pattern"
            % (self.position, self.modulus)
        )


@dataclass(frozen=True)
class XPairing:
    """pairs: ((i, n-1-i) for i < n//2); center: the fixed middle index
    for odd n, else None."""

    pairs: tuple
    center: int | None


def xstate_pairing(rho: DensityMatrix, tol: float = XSTATE_TOL) -> XPairing:
    """Verify the X pattern and return its pair structure.

    Raises NotXState at the first (row-major) off-pattern entry whose
    modulus exceeds tol.
    """
    n = rho.dim
    mods = np.abs(rho.entries)
    for i in range(n):
        for j in range(i + 1, n):
            if j == n - 1 - i:
                continue
            if mods[i, j] > tol:
                raise NotXState((i, j), mods[i, j])
    pairs = tuple((i, n - 1 - i) for i in range(n // 2))
    center = (n - 1) // 2 if n % 2 == 1 else None
    return XPairing(pairs, center)


def qubit_concurrence(rho: DensityMatrix):
    """Exact concurrence of a (possibly subnormalized) 2x2 state.

    Returns (2 * |rho_01|, attaining Ensemble). The ensemble has an anchor
    member built on the smaller diagonal entry, which absorbs the whole
    coupling, plus a residual projector on the other basis state:

        anchor a (ties pick 0), v = the a-th column scaled by 1/sqrt(rho_aa),
        weights p1 = rho_aa + |c|^2 / rho_aa and p2 = trace - p1.

    The weighted average of pure_l1 over the ensemble equals the value to
    machine precision. When the anchor diagonal is below 1e-12 the division
    is unstable and the spectral ensemble is returned instead (the value is
    unchanged; the attainment certificate degrades toward the PSD floor).
    """
    if rho.dim != 2:
        raise StateValidationError("qubit_concurrence needs dim 2, got %d" % rho.dim)
    t = rho.trace_weight
    if t <= 0.0:
        return 0.0, Ensemble((), 0.0)
    d0 = float(rho.entries[0, 0].real)
    d1 = float(rho.entries[1, 1].real)
    c = complex(rho.entries[0, 1])
    value = 2.0 * abs(c)

    if abs(c) < MEMBER_DROP:
        members = tuple(
            (d, basis_state(2, i)) for i, d in ((0, d0), (1, d1)) if d > MEMBER_DROP
        )
        return value, Ensemble(members, t)

    anchor = 0 if d0 <= d1 else 1
    da = d0 if anchor == 0 else d1
    if da < DEGENERATE_DIAG:
        return value, spectral_ensemble(rho)

    if anchor == 0:
        v = np.array([d0, c.conjugate()], dtype=np.complex128) / math.sqrt(d0)
    else:
        v = np.array([c, d1], dtype=np.complex128) / math.sqrt(d1)
    p1 = float(np.sum(np.abs(v) ** 2))
    members = [(p1, PureState(2, v / math.sqrt(p1)))]
    p2 = t - p1  # the residual is (larger diagonal) - |c|^2 / (smaller)
    if p2 > MEMBER_DROP:
        members.append((p2, basis_state(2, 1 - anchor)))
    return value, Ensemble(tuple(members), t)


def xstate_concurrence(rho: DensityMatrix):
    """Exact concurrence of an X-patterned state of any dimension.

    Value: 2 * sum over pairs (i, n-1-i) of |rho_{i,n-1-i}|. Ensemble:
    union of the per-pair qubit constructions embedded at their indices,
    plus the center basis projector for odd n.
    """
    pairing = xstate_pairing(rho)
    n = rho.dim
    values = []
    members = []
    for i, j in pairing.pairs:
        sub = rho.entries[np.ix_((i, j), (i, j))]
        weight = float(sub.trace().real)
        block = DensityMatrix(2, sub, weight if weight > 0.0 else 0.0)
        v, ens = qubit_concurrence(block)
        values.append(v)
        for p, psi in ens.members:
            full = np.zeros(n, dtype=np.complex128)
            full[[i, j]] = psi.amplitudes
            members.append((p, PureState(n, full)))
    if pairing.center is not None:
        pc = float(rho.entries[pairing.center, pairing.center].real)
        if pc > MEMBER_DROP:
            members.append((pc, basis_state(n, pairing.center)))
    return math.fsum(values), Ensemble(tuple(members), rho.trace_weight)


def _solve_singleton(state: DensityMatrix):
    return 0.0, Ensemble(((state.trace_weight, basis_state(1, 0)),), state.trace_weight)


def concurrence(rho: DensityMatrix, cfg=None):
    """Coherence concurrence of a normalized state, analytic where possible.

    Pipeline: block_split, then per block either the qubit closed form
    (dim <= 2; a connected block can never be X-patterned above dim 2) or
    the numeric roof on the normalized block scaled back by its weight,
    then additive reassembly. Returns a RoofResult whose path is
    "analytic", "numeric", or "mixed" and whose diagnostics lists each
    block's route.
    """
    from .convexroof import RoofConfig, RoofResult, roof_optimize

    if cfg is None:
        cfg = RoofConfig()
    if abs(rho.trace_weight - 1.0) > 1e-10:
        raise StateValidationError("concurrence expects a normalized state")

    decomposition = block_split(rho)
    solved = []

    def solve_block(state):
        if state.dim == 1:
            v, ens = _solve_singleton(state)
            solved.append({"dim": 1, "path": "analytic", "value": v, "converged": True})
            return v, ens
        if state.dim == 2:
            v, ens = qubit_concurrence(state)
            solved.append({"dim": 2, "path": "analytic", "value": v, "converged": True})
            return v, ens
        weight = state.trace_weight
        normalized = DensityMatrix(state.dim, state.entries / weight, 1.0)
        res = roof_optimize(normalized, pure_l1, cfg)
        v = weight * res.value
        ens = Ensemble(
            tuple((weight * p, psi) for p, psi in res.ensemble.members), weight
        )
        solved.append({
            "dim": state.dim,
            "path": "numeric",
            "value": v,
            "converged": bool(res.diagnostics["converged"]),
            "lower_bound": weight * res.diagnostics["lower_bound"],
            "optimizer": res.diagnostics,
        })
        return v, ens

    value, ensemble = additive_concurrence(decomposition, solve_block)

    # zero-weight blocks are skipped by the solver; report them in place
    reports = []
    it = iter(solved)
    for idx, state in decomposition.blocks:
        if state.trace_weight <= 0.0:
            entry = {"dim": state.dim, "path": "analytic", "value": 0.0, "converged": True}
        else:
            entry = next(it)
        entry["indices"] = list(idx)
        reports.append(entry)

    paths = {r["path"] for r in reports}
    if paths <= {"analytic"}:
        path = "analytic"
    elif paths == {"numeric"}:
        path = "numeric"
    else:
        path = "mixed"
    diagnostics = {
        "blocks": reports,
        "converged": all(r["converged"] for r in reports),
        "lower_bound": l1_coherence(rho),
    }
    return RoofResult(float(value), ensemble, diagnostics, path)
