"""Pure-Python reference kernel.

Same contract as the compiled extension: refine() minimizes the signed
row-objective sum over row-pair rotations, in place. Kept dependency-free
beyond numpy so it can stand in whenever the extension is unavailable.
"""
from __future__ import annotations

import math

import numpy as np

BACKEND = "python"

STEP0 = math.pi / 4
STEP_CAP = math.pi / 2
IMPROVE_REL = 1e-13
CERTIFY_SLACK = 1e-9


def _row_l1(w):
    # (sum of moduli)^2 minus squared norm
    mods = np.abs(w)
    s = float(mods.sum())
    return s * s - float((mods * mods).sum())


def _row_neg(w, d_a, d_b):
    sv = np.linalg.svd(w.reshape(d_a, d_b), compute_uv=False)
    s = float(sv.sum())
    return (s * s - float((sv * sv).sum())) * 0.5


def _contrib(w, kind, d_a, d_b, sign):
    if kind == 0:
        return sign * _row_l1(w)
    return sign * _row_neg(w, d_a, d_b)


def refine(w_rows, kind, d_a, d_b, max_sweeps, conv_tol, lower_stop,
           sign, trace_out):
    """Minimize sum_k sign*obj(row_k) over row-pair rotations, in place.

    Returns (total, sweeps_used, max_step, converged, trials).
    """
    m, n = w_rows.shape
    npairs = m * (m - 1) // 2
    ncoord = 2 * npairs
    steps = np.full(max(ncoord, 1), STEP0)
    contrib = np.array([_contrib(w_rows[k], kind, d_a, d_b, sign)
                        for k in range(m)])
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
                    thresh = IMPROVE_REL * (1.0 + abs(base))
                    improved = False
                    for th in (st, -st):
                        co = math.cos(th)
                        si = math.sin(th)
                        if rot == 0:
                            wa = co * w_rows[a] - si * w_rows[b]
                            wb = si * w_rows[a] + co * w_rows[b]
                        else:
                            isi = 1j * si
                            wa = co * w_rows[a] + isi * w_rows[b]
                            wb = isi * w_rows[a] + co * w_rows[b]
                        ca = _contrib(wa, kind, d_a, d_b, sign)
                        cb = _contrib(wb, kind, d_a, d_b, sign)
                        trials += 2
                        cand = ca + cb
                        if cand < base - thresh:
                            w_rows[a] = wa
                            w_rows[b] = wb
                            total += cand - base
                            contrib[a] = ca
                            contrib[b] = cb
                            steps[ci] = min(st * 2.0, STEP_CAP)
                            improved = True
                            break
                    if not improved:
                        steps[ci] = st * 0.5
                    ci += 1
        trace_out[sweep] = total
        if total <= lower_stop + CERTIFY_SLACK:
            converged = True
            break
        if not any_active:
            converged = True
            break

    # incremental updates drift at the 1e-15 level; report the exact total
    total = math.fsum(_contrib(w_rows[k], kind, d_a, d_b, sign)
                      for k in range(m))
    if sweeps_used > 0:
        trace_out[sweeps_used - 1] = total

    max_step = float(steps.max()) if ncoord else 0.0
    return total, sweeps_used, max_step, bool(converged), trials


def row_l1(w):
    return _row_l1(np.asarray(w, dtype=np.complex128))


def row_neg(w, d_a, d_b):
    return _row_neg(np.asarray(w, dtype=np.complex128), d_a, d_b)


def herm_eigvals(a):
    # parity hook; numpy does the work in this backend
    return np.linalg.eigvalsh(np.asarray(a, dtype=np.complex128))
