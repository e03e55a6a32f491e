# cython: language_level=3
# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled coordinate-descent kernel.

Mirrors _pyref exactly: same constants, same sweep schedule, same
acceptance rule, same return tuple. Eigenvalues for the nuclear norm
come from a cyclic complex Jacobi iteration so the extension needs no
LAPACK and no numpy C API.
"""

import numpy as np

from libc.math cimport cos, fabs, hypot, sin, sqrt

BACKEND = "compiled"

ctypedef double complex cplx

cdef double STEP0 = 0.7853981633974483        # pi/4
cdef double STEP_CAP = 1.5707963267948966     # pi/2
cdef double IMPROVE_REL = 1e-13
cdef double CERTIFY_SLACK = 1e-9
cdef cplx UNIT_I = 1j


cdef inline double _row_l1(cplx *w, Py_ssize_t n) noexcept nogil:
    # (sum of moduli)^2 minus squared norm
    cdef double s = 0.0, q = 0.0, a
    cdef Py_ssize_t i
    for i in range(n):
        a = hypot(w[i].real, w[i].imag)
        s += a
        q += a * a
    return s * s - q


cdef void _herm_eigvals(cplx *a, Py_ssize_t n, double *out) noexcept nogil:
    # Cyclic complex Jacobi; destroys the row-major Hermitian input.
    cdef Py_ssize_t p, q, i, sweep
    cdef double offsq, scale, app, aqq, mag, tau, t, c, s
    cdef cplx alpha, phase, tp, tq
    for sweep in range(60):
        offsq = 0.0
        scale = 1e-300
        for p in range(n):
            scale += fabs(a[p * n + p].real)
            for q in range(p + 1, n):
                alpha = a[p * n + q]
                offsq += alpha.real * alpha.real + alpha.imag * alpha.imag
        if offsq <= 1e-28 * scale * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = a[p * n + q]
                mag = hypot(alpha.real, alpha.imag)
                app = a[p * n + p].real
                aqq = a[q * n + q].real
                if mag <= 1e-18 * (fabs(app) + fabs(aqq)) + 1e-300:
                    a[p * n + q] = 0.0
                    a[q * n + p] = 0.0
                    continue
                phase = alpha / mag
                tau = (aqq - app) / (2.0 * mag)
                if tau >= 0.0:
                    t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                a[p * n + p] = app - t * mag
                a[q * n + q] = aqq + t * mag
                a[p * n + q] = 0.0
                a[q * n + p] = 0.0
                for i in range(n):
                    if i == p or i == q:
                        continue
                    tp = a[i * n + p]
                    tq = a[i * n + q]
                    a[i * n + p] = c * tp - s * phase.conjugate() * tq
                    a[i * n + q] = s * phase * tp + c * tq
                    a[p * n + i] = a[i * n + p].conjugate()
                    a[q * n + i] = a[i * n + q].conjugate()
    for p in range(n):
        out[p] = a[p * n + p].real


cdef double _row_neg(cplx *w, Py_ssize_t d_a, Py_ssize_t d_b,
                     cplx *gram, double *eig) noexcept nogil:
    # ((sum of singular values)^2 - squared norm) / 2 for the d_a x d_b
    # reshape of w; Gram matrix taken on the smaller factor.
    cdef Py_ssize_t r = d_a if d_a <= d_b else d_b
    cdef Py_ssize_t kdim = d_b if d_a <= d_b else d_a
    cdef Py_ssize_t i, j, k
    cdef cplx acc
    cdef double q = 0.0, ssum = 0.0, ev
    for i in range(r):
        for j in range(i, r):
            acc = 0.0
            if d_a <= d_b:
                for k in range(kdim):
                    acc = acc + w[i * d_b + k] * w[j * d_b + k].conjugate()
            else:
                for k in range(kdim):
                    acc = acc + w[k * d_b + i].conjugate() * w[k * d_b + j]
            gram[i * r + j] = acc
            if i != j:
                gram[j * r + i] = acc.conjugate()
    for i in range(r):
        q += gram[i * r + i].real
    _herm_eigvals(gram, r, eig)
    for i in range(r):
        ev = eig[i]
        if ev > 0.0:
            ssum += sqrt(ev)
    return (ssum * ssum - q) * 0.5


cdef inline double _contrib(cplx *w, Py_ssize_t n, int kind,
                            Py_ssize_t d_a, Py_ssize_t d_b, double sign,
                            cplx *gram, double *eig) noexcept nogil:
    if kind == 0:
        return sign * _row_l1(w, n)
    return sign * _row_neg(w, d_a, d_b, gram, eig)


def refine(cplx[:, ::1] w_rows, int kind, Py_ssize_t d_a, Py_ssize_t d_b,
           Py_ssize_t max_sweeps, double conv_tol, double lower_stop,
           double sign, double[::1] trace_out):
    """Minimize sum_k sign*obj(row_k) over row-pair rotations, in place.

    Returns (total, sweeps_used, max_step, converged, trials).
    """
    cdef Py_ssize_t m = w_rows.shape[0]
    cdef Py_ssize_t n = w_rows.shape[1]
    cdef Py_ssize_t npairs = m * (m - 1) // 2
    cdef Py_ssize_t ncoord = 2 * npairs
    cdef Py_ssize_t r = d_a if d_a <= d_b else d_b
    if kind == 0:
        r = 1

    steps_arr = np.full(max(ncoord, 1), STEP0)
    contrib_arr = np.empty(max(m, 1))
    wa_arr = np.empty(max(n, 1), dtype=np.complex128)
    wb_arr = np.empty(max(n, 1), dtype=np.complex128)
    gram_arr = np.empty(max(r * r, 1), dtype=np.complex128)
    eig_arr = np.empty(max(r, 1))
    cdef double[::1] steps = steps_arr
    cdef double[::1] contrib = contrib_arr
    cdef cplx[::1] wa = wa_arr
    cdef cplx[::1] wb = wb_arr
    cdef cplx[::1] gram = gram_arr
    cdef double[::1] eig = eig_arr

    cdef Py_ssize_t k, i, a, b, ci, rot, sweep, d
    cdef Py_ssize_t sweeps_used = 0, trials = 0
    cdef bint converged = False, any_active, improved
    cdef double total = 0.0, base, thresh, cand, ca, cb
    cdef double st, th, co, si, max_step
    cdef cplx isi

    for k in range(m):
        contrib[k] = _contrib(&w_rows[k, 0], n, kind, d_a, d_b, sign,
                              &gram[0], &eig[0])
        total += contrib[k]

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
                    thresh = IMPROVE_REL * (1.0 + fabs(base))
                    improved = False
                    for d in range(2):
                        th = st if d == 0 else -st
                        co = cos(th)
                        si = sin(th)
                        if rot == 0:
                            for i in range(n):
                                wa[i] = co * w_rows[a, i] - si * w_rows[b, i]
                                wb[i] = si * w_rows[a, i] + co * w_rows[b, i]
                        else:
                            isi = UNIT_I * si
                            for i in range(n):
                                wa[i] = co * w_rows[a, i] + isi * w_rows[b, i]
                                wb[i] = isi * w_rows[a, i] + co * w_rows[b, i]
                        ca = _contrib(&wa[0], n, kind, d_a, d_b, sign,
                                      &gram[0], &eig[0])
                        cb = _contrib(&wb[0], n, kind, d_a, d_b, sign,
                                      &gram[0], &eig[0])
                        trials += 2
                        cand = ca + cb
                        if cand < base - thresh:
                            for i in range(n):
                                w_rows[a, i] = wa[i]
                                w_rows[b, i] = wb[i]
                            total += cand - base
                            contrib[a] = ca
                            contrib[b] = cb
                            st = st * 2.0
                            if st > STEP_CAP:
                                st = STEP_CAP
                            steps[ci] = st
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
    total = 0.0
    for k in range(m):
        total += _contrib(&w_rows[k, 0], n, kind, d_a, d_b, sign,
                          &gram[0], &eig[0])
    if sweeps_used > 0:
        trace_out[sweeps_used - 1] = total

    max_step = 0.0
    for ci in range(ncoord):
        if steps[ci] > max_step:
            max_step = steps[ci]

    return total, sweeps_used, max_step, bool(converged), trials


def row_l1(cplx[::1] w):
    return _row_l1(&w[0], w.shape[0])


def row_neg(cplx[::1] w, Py_ssize_t d_a, Py_ssize_t d_b):
    cdef Py_ssize_t r = d_a if d_a <= d_b else d_b
    gram_arr = np.empty(r * r, dtype=np.complex128)
    eig_arr = np.empty(r)
    cdef cplx[::1] gram = gram_arr
    cdef double[::1] eig = eig_arr
    return _row_neg(&w[0], d_a, d_b, &gram[0], &eig[0])


def herm_eigvals(cplx[:, ::1] a):
    # test hook for the Jacobi solver; returns unsorted eigenvalues
    cdef Py_ssize_t n = a.shape[0]
    buf_arr = np.array(a, dtype=np.complex128, order="C")
    out_arr = np.empty(n)
    cdef cplx[:, ::1] buf = buf_arr
    cdef double[::1] out = out_arr
    _herm_eigvals(&buf[0, 0], n, &out[0])
    return out_arr
