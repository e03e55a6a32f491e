"""Convex-roof (and concave-roof) optimization over pure-state ensembles.

The optimizer works on the matrix W whose rows are the unnormalized
members sqrt(q_k)|phi_k>. Every decomposition of a state is W = U^T B
for some isometry U, where the rows of B come from the spectral
ensemble, so the search space is exactly the set of valid ensembles.
Rotating row pairs of W leaves sum_k w_k w_k^dag = rho invariant, which
keeps every iterate a decomposition of rho with no repair step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .statecore import (
    ENSEMBLE_WEIGHT_DROP,
    DensityMatrix,
    Ensemble,
    Isometry,
    PureState,
    StateValidationError,
    spectral_ensemble,
)


@dataclass(frozen=True)
class RoofConfig:
    """Optimizer knobs.

    ensemble_size: decomposition cardinality m; None means rank(rho)^2,
    which is always enough to reach the roof value.
    """

    ensemble_size: int | None = None
    restarts: int = 16
    max_iterations: int = 2000
    convergence_tol: float = 1e-8
    seed: int = 0
    direction: str = "minimize"

    def __post_init__(self):
        if self.ensemble_size is not None and self.ensemble_size < 1:
            raise StateValidationError("ensemble_size must be at least 1")
        if self.restarts < 1:
            raise StateValidationError("restarts must be at least 1")
        if self.max_iterations < 1:
            raise StateValidationError("max_iterations must be at least 1")
        if not self.convergence_tol > 0.0:
            raise StateValidationError("convergence_tol must be positive")
        if self.direction not in ("minimize", "maximize"):
            raise StateValidationError(
                "direction must be 'minimize' or 'maximize', got %r" % (self.direction,)
            )


@dataclass(frozen=True, eq=False)
class RoofResult:
    """value is the ensemble average of the objective over `ensemble`;
    diagnostics carries per-restart convergence data; path records which
    route produced the value ("analytic", "numeric", or "mixed")."""

    value: float
    ensemble: Ensemble
    diagnostics: dict
    path: str


def random_isometry(rows, cols, rng) -> Isometry:
    """Haar-distributed isometry drawn from a given numpy Generator."""
    if rows > cols:
        raise StateValidationError("need cols >= rows, got %dx%d" % (rows, cols))
    g = (rng.standard_normal((cols, rows)) + 1j * rng.standard_normal((cols, rows)))
    q, r = np.linalg.qr(g / math.sqrt(2.0))
    d = r.diagonal()
    q = q * (d / np.abs(d))  # phase fix, otherwise QR is not Haar
    return Isometry(rows, cols, q.T)


def _builtin_kind(f):
    tag = getattr(f, "_kernel", None)
    if tag is None:
        return None
    if tag[0] == "l1":
        return (0, 0, 0)
    if tag[0] == "neg":
        return (1, int(tag[1]), int(tag[2]))
    return None


def _lower_bound(rho, kind):
    # the mixed-state quantity bounds every ensemble average from below,
    # so hitting it certifies the restart is globally optimal
    if kind is None:
        return None
    if kind[0] == 0:
        from .coherence import l1_coherence

        return l1_coherence(rho)
    from .entangle import BipartiteState, negativity

    return negativity(BipartiteState((kind[1], kind[2]), rho))


def _refine_generic(w_rows, f, max_sweeps, conv_tol, lower_stop, sign, trace_out):
    # same schedule as the kernels, objective evaluated through f itself
    step0 = _kernels.STEP0
    step_cap = _kernels.STEP_CAP
    improve_rel = _kernels.IMPROVE_REL
    certify_slack = _kernels.CERTIFY_SLACK

    def row_obj(w):
        q = float(np.sum(np.abs(w) ** 2))
        if q < ENSEMBLE_WEIGHT_DROP:
            return 0.0
        return sign * q * float(f(PureState(w.shape[0], w / math.sqrt(q))))

    m = w_rows.shape[0]
    ncoord = m * (m - 1)
    steps = np.full(max(ncoord, 1), step0)
    contrib = np.array([row_obj(w_rows[k]) for k in range(m)])
    total = float(contrib.sum())
    sweeps_used = 0
    trials = 0
    converged = False
    for sweep in range(max_sweeps):
        sweeps_used = sweep + 1
        any_active = False
        ci = 0
        for a in range(m - 1):
            for b in range(a + 1, m):
                for rot in range(2):
                    st = steps[ci]
                    if st < conv_tol:
                        ci += 1
                        continue
                    any_active = True
                    base = contrib[a] + contrib[b]
                    thresh = improve_rel * (1.0 + abs(base))
                    improved = False
                    for th in (st, -st):
                        co = math.cos(th)
                        si = math.sin(th)
                        if rot == 0:
                            wa = co * w_rows[a] - si * w_rows[b]
                            wb = si * w_rows[a] + co * w_rows[b]
                        else:
                            wa = co * w_rows[a] + 1j * si * w_rows[b]
                            wb = 1j * si * w_rows[a] + co * w_rows[b]
                        ca = row_obj(wa)
                        cb = row_obj(wb)
                        trials += 2
                        if ca + cb < base - thresh:
                            w_rows[a] = wa
                            w_rows[b] = wb
                            total += ca + cb - base
                            contrib[a] = ca
                            contrib[b] = cb
                            steps[ci] = min(st * 2.0, step_cap)
                            improved = True
                            break
                    if not improved:
                        steps[ci] = st * 0.5
                    ci += 1
        trace_out[sweep] = total
        if total <= lower_stop + certify_slack:
            converged = True
            break
        if not any_active:
            converged = True
            break
    total = math.fsum(row_obj(w_rows[k]) for k in range(m))
    if sweeps_used > 0:
        trace_out[sweeps_used - 1] = total
    max_step = float(steps.max()) if ncoord else 0.0
    return total, sweeps_used, max_step, bool(converged), trials


def _ensemble_from_rows(w_rows, target_trace) -> Ensemble:
    members = []
    for k in range(w_rows.shape[0]):
        q = float(np.sum(np.abs(w_rows[k]) ** 2))
        if q < ENSEMBLE_WEIGHT_DROP:
            continue
        members.append((q, PureState(w_rows.shape[1], w_rows[k] / math.sqrt(q))))
    return Ensemble(tuple(members), target_trace)


def roof_optimize(rho: DensityMatrix, f, cfg: RoofConfig | None = None) -> RoofResult:
    """Optimize the ensemble average of f over decompositions of rho.

    f maps PureState to float. When f carries a recognized kernel tag the
    hot loop runs in the selected backend; any other callable goes through
    the generic Python path. direction "minimize" gives the convex roof,
    "maximize" the concave roof. Deterministic for a fixed seed: restarts
    draw from spawned child streams in a fixed order and ties keep the
    earliest restart.
    """
    if cfg is None:
        cfg = RoofConfig()
    if abs(rho.trace_weight - 1.0) > 1e-10:
        raise StateValidationError("roof optimization expects a normalized state")

    base = spectral_ensemble(rho)
    rank = len(base.members)
    sign = 1.0 if cfg.direction == "minimize" else -1.0
    kind = _builtin_kind(f)

    if rank == 1:
        psi = base.members[0][1]
        value = float(f(psi))
        diagnostics = {
            "backend": _kernels.BACKEND,
            "direction": cfg.direction,
            "seed": cfg.seed,
            "rank": 1,
            "ensemble_size": 1,
            "lower_bound": None,
            "certified_optimal": True,  # pure states have a single decomposition
            "converged": True,
            "best_restart": None,
            "restarts_executed": 0,
            "restarts": (),
        }
        return RoofResult(value, Ensemble(((1.0, psi),), 1.0), diagnostics, "numeric")

    m = cfg.ensemble_size if cfg.ensemble_size is not None else rank * rank
    if m < rank:
        raise StateValidationError(
            "ensemble_size %d is below the state rank %d" % (m, rank)
        )

    b = np.array([math.sqrt(p) * psi.amplitudes for p, psi in base.members])
    lower = _lower_bound(rho, kind) if cfg.direction == "minimize" else None
    lower_stop = lower if lower is not None else -math.inf

    children = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    trace_buf = np.empty(cfg.max_iterations)
    best_total = math.inf
    best_rows = None
    best_idx = None
    certified = False
    stats = []
    for idx in range(cfg.restarts):
        rng = np.random.default_rng(children[idx])
        u = random_isometry(rank, m, rng)
        w_rows = np.ascontiguousarray(u.entries.T @ b)
        if kind is not None:
            total, sweeps, max_step, conv, trials = _kernels.refine(
                w_rows, kind[0], kind[1], kind[2], cfg.max_iterations,
                cfg.convergence_tol, lower_stop, sign, trace_buf)
        else:
            total, sweeps, max_step, conv, trials = _refine_generic(
                w_rows, f, cfg.max_iterations, cfg.convergence_tol,
                lower_stop, sign, trace_buf)
        stats.append({
            "value": float(sign * total),
            "iterations": int(sweeps),
            "final_step": float(max_step),
            "converged": bool(conv),
            "trials": int(trials),
            "objective_trace": tuple(float(sign * t) for t in trace_buf[:sweeps]),
        })
        if total < best_total:  # strict: ties keep the earliest restart
            best_total = total
            best_rows = w_rows
            best_idx = idx
        if lower is not None and best_total <= lower + _kernels.CERTIFY_SLACK:
            certified = True
            break

    ensemble = _ensemble_from_rows(best_rows, rho.trace_weight)
    value = math.fsum(p * float(f(psi)) for p, psi in ensemble.members)
    diagnostics = {
        "backend": _kernels.BACKEND,
        "direction": cfg.direction,
        "seed": cfg.seed,
        "rank": rank,
        "ensemble_size": int(m),
        "lower_bound": lower,
        "certified_optimal": certified,
        "converged": bool(certified or stats[best_idx]["converged"]),
        "best_restart": best_idx,
        "restarts_executed": len(stats),
        "restarts": tuple(stats),
    }
    return RoofResult(float(value), ensemble, diagnostics, "numeric")
