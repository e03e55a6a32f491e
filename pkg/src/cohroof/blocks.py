"""Direct-sum structure: split a state into irreducible blocks and
reassemble per-block results additively."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .statecore import DensityMatrix, Ensemble, PureState, StateValidationError

BLOCK_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class BlockDecomposition:
    """blocks: tuple of (basis_indices, DensityMatrix) in order of each
    block's smallest index; permutation: concatenated block indices, the
    basis relabeling that makes the matrix block diagonal."""

    blocks: tuple
    permutation: tuple


def block_split(rho: DensityMatrix, tol: float = BLOCK_TOL) -> BlockDecomposition:
    """Connected components of the coupling graph (edge iff |rho_ij| > tol).

    Each block keeps its own trace as trace_weight; a block whose diagonal
    entries all sit below tol gets trace_weight 0.
    """
    if tol < 0:
        raise StateValidationError("tol must be nonnegative")
    n = rho.dim
    mods = np.abs(rho.entries)
    seen = [False] * n
    components = []
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = True
        stack = [start]
        comp = []
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if not seen[j] and j != i and mods[i, j] > tol:
                    seen[j] = True
                    stack.append(j)
        components.append(tuple(sorted(comp)))

    blocks = []
    for idx in components:
        sub = rho.entries[np.ix_(idx, idx)]
        if all(sub[k, k].real < tol for k in range(len(idx))):
            weight = 0.0
        else:
            weight = float(sub.trace().real)
        blocks.append((idx, DensityMatrix(len(idx), sub, weight)))
    permutation = tuple(i for idx in components for i in idx)
    return BlockDecomposition(tuple(blocks), permutation)


def additive_concurrence(decomposition: BlockDecomposition, solver):
    """Sum per-block values and take the union of the embedded ensembles.

    solver(block_state) -> (value, Ensemble) on the subnormalized block;
    zero-weight blocks contribute 0 and no members. Returns
    (value, Ensemble) in the original basis.
    """
    dim = len(decomposition.permutation)
    values = []
    members = []
    total_trace = 0.0
    for idx, state in decomposition.blocks:
        total_trace += state.trace_weight
        if state.trace_weight <= 0.0:
            values.append(0.0)
            continue
        value, ensemble = solver(state)
        values.append(float(value))
        for p, psi in ensemble.members:
            full = np.zeros(dim, dtype=np.complex128)
            full[list(idx)] = psi.amplitudes
            members.append((p, PureState(dim, full)))
    return math.fsum(values), Ensemble(tuple(members), total_trace)
