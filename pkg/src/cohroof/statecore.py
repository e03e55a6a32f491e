"""Core state types: density matrices, pure states, ensembles, isometries.

All basis indexing is 0-based: the reference basis is |0>, ..., |n-1>.
Validated states enter the library through :func:`validate_density`; the
dataclass constructors only normalize storage (complex128, read-only) and
check shapes, so internal code can build subnormalized blocks directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_EIG_FLOOR = -1e-10
MINOR_FLOOR = -1e-10
RECONSTRUCTION_TOL = 1e-10
ISOMETRY_TOL = 1e-10
SPECTRAL_WEIGHT_DROP = 1e-12
ENSEMBLE_WEIGHT_DROP = 1e-14


class StateValidationError(ValueError):
    """Input fails a state-space requirement."""


class NotHermitian(StateValidationError):
    def __init__(self, position, deviation):
        self.position = tuple(position)
        self.deviation = float(deviation)
        super().__init__(
            "entry %s: |m[i,j] - conj(m[j,i])| = %.3e exceeds %g"
            % (self.position, self.deviation, HERMITIAN_TOL)
        )


class NotPositiveSemidefinite(StateValidationError):
    def __init__(self, eigenvalue=None, minor=None):
        self.eigenvalue = eigenvalue
        self.minor = minor
        if minor is not None:
            i, j, value = minor
            msg = "2x2 principal minor (%d,%d) = %.3e is below %g" % (i, j, value, MINOR_FLOOR)
        else:
            msg = "smallest eigenvalue %.6e is below %g" % (eigenvalue, PSD_EIG_FLOOR)
        super().__init__(msg)


class TraceMismatch(StateValidationError):
    def __init__(self, trace, expected):
        self.trace = float(trace)
        self.expected = float(expected)
        super().__init__(
            "trace %.12g differs from expected %.12g by %.3e"
            % (self.trace, self.expected, abs(self.trace - self.expected))
        )


class NotIsometry(StateValidationError):
    def __init__(self, deviation):
        self.deviation = float(deviation)
        super().__init__("max |U U^dag - I| = %.3e exceeds %g" % (self.deviation, ISOMETRY_TOL))


class InternalInconsistency(RuntimeError):
    """Two independent computations of the same quantity disagree."""


def _frozen_complex(a):
    m = np.array(a, dtype=np.complex128)
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A Hermitian PSD matrix with trace equal to trace_weight.

    trace_weight is 1 for normalized states and in (0,1] for subnormalized
    blocks (0 itself appears only for the all-zero blocks block_split emits).
    Build through validate_density unless the matrix is valid by construction.
    """

    dim: int
    entries: np.ndarray
    trace_weight: float = 1.0

    def __post_init__(self):
        m = _frozen_complex(self.entries)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise StateValidationError("density matrix must be square, got shape %s" % (m.shape,))
        if m.shape[0] != self.dim:
            raise StateValidationError("dim %d does not match matrix shape %s" % (self.dim, m.shape))
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "trace_weight", float(self.trace_weight))


@dataclass(frozen=True, eq=False)
class PureState:
    """A normalized amplitude vector in the reference basis."""

    dim: int
    amplitudes: np.ndarray

    def __post_init__(self):
        a = _frozen_complex(self.amplitudes)
        if a.ndim != 1:
            raise StateValidationError("amplitudes must be a vector, got shape %s" % (a.shape,))
        if a.shape[0] != self.dim:
            raise StateValidationError("dim %d does not match vector length %d" % (self.dim, a.shape[0]))
        norm_sq = float(np.sum(np.abs(a) ** 2))
        if abs(norm_sq - 1.0) > 1e-10:
            raise StateValidationError("squared norm %.12g is not 1 within 1e-10" % norm_sq)
        object.__setattr__(self, "amplitudes", a)

    def projector(self):
        return np.outer(self.amplitudes, self.amplitudes.conj())


def pure_state(amplitudes) -> PureState:
    a = np.asarray(amplitudes, dtype=np.complex128)
    return PureState(a.shape[0], a)


def basis_state(dim, index) -> PureState:
    a = np.zeros(dim, dtype=np.complex128)
    a[index] = 1.0
    return PureState(dim, a)


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Weighted pure states {(p_k, |psi_k>)} with sum(p_k) = target_trace.

    Weights are positive; members are normalized. The reconstruction
    guarantee (weighted projector sum equals a specific source matrix)
    is a property of the producing operation, checked where produced.
    """

    members: tuple
    target_trace: float = 1.0

    def __post_init__(self):
        members = tuple((float(p), psi) for p, psi in self.members)
        for p, psi in members:
            if p <= 0.0:
                raise StateValidationError("ensemble weight %.3e is not positive" % p)
            if not isinstance(psi, PureState):
                raise StateValidationError("ensemble member is not a PureState")
        total = math.fsum(p for p, _ in members)
        if abs(total - self.target_trace) > 1e-10:
            raise StateValidationError(
                "weights sum to %.12g, expected %.12g" % (total, self.target_trace)
            )
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "target_trace", float(self.target_trace))


@dataclass(frozen=True, eq=False)
class Isometry:
    """U with U U^dag = I on its row space; rows <= cols."""

    rows: int
    cols: int
    entries: np.ndarray

    def __post_init__(self):
        u = _frozen_complex(self.entries)
        if u.ndim != 2 or u.shape != (self.rows, self.cols):
            raise StateValidationError(
                "isometry shape %s does not match (%d, %d)" % (u.shape, self.rows, self.cols)
            )
        if self.rows > self.cols:
            raise StateValidationError("isometry needs cols >= rows, got %dx%d" % (self.rows, self.cols))
        dev = np.abs(u @ u.conj().T - np.eye(self.rows)).max()
        if dev > ISOMETRY_TOL:
            raise NotIsometry(dev)
        object.__setattr__(self, "entries", u)


def validate_density(raw_matrix, trace_weight=1.0) -> DensityMatrix:
    """Check a raw complex matrix against all density-matrix invariants.

    Parameters
    ----------
    raw_matrix : array_like
        Square complex matrix.
    trace_weight : float
        Expected trace, in (0, 1]. 1 for normalized states.

    Returns
    -------
    DensityMatrix

    Raises
    ------
    NotHermitian, NotPositiveSemidefinite, TraceMismatch
        With the violating entry, eigenvalue, or minor in the message.
    """
    m = np.asarray(raw_matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise StateValidationError("expected a square matrix, got shape %s" % (m.shape,))
    if not (0.0 < trace_weight <= 1.0):
        raise StateValidationError("trace_weight %.12g is not in (0, 1]" % trace_weight)
    n = m.shape[0]

    dev = np.abs(m - m.conj().T)
    worst = np.unravel_index(np.argmax(dev), dev.shape)
    if dev[worst] > HERMITIAN_TOL:
        raise NotHermitian(worst, dev[worst])

    trace = float(m.trace().real)
    if abs(trace - trace_weight) > TRACE_TOL:
        raise TraceMismatch(trace, trace_weight)

    eigs = np.linalg.eigvalsh((m + m.conj().T) / 2.0)
    if eigs[0] < PSD_EIG_FLOOR:
        raise NotPositiveSemidefinite(eigenvalue=float(eigs[0]))

    # checked on top of the spectrum because analytic decompositions divide by these
    diag = m.diagonal().real
    for i in range(n):
        for j in range(i + 1, n):
            minor = diag[i] * diag[j] - abs(m[i, j]) ** 2
            if minor < MINOR_FLOOR:
                raise NotPositiveSemidefinite(minor=(i, j, float(minor)))

    return DensityMatrix(n, m, float(trace_weight))


def ensemble_to_state(e: Ensemble) -> DensityMatrix:
    """Entrywise sum(p_k |psi_k><psi_k|), trace_weight = target_trace."""
    if not e.members:
        raise StateValidationError("cannot build a state from an empty ensemble")
    dim = e.members[0][1].dim
    acc = np.zeros((dim, dim), dtype=np.complex128)
    for p, psi in e.members:
        if psi.dim != dim:
            raise StateValidationError("ensemble members have mixed dimensions")
        acc += p * psi.projector()
    return DensityMatrix(dim, acc, e.target_trace)


def reconstruction_error(e: Ensemble, rho: DensityMatrix) -> float:
    """Max entrywise deviation of the ensemble's projector sum from rho."""
    acc = np.zeros((rho.dim, rho.dim), dtype=np.complex128)
    for p, psi in e.members:
        acc += p * psi.projector()
    return float(np.abs(acc - rho.entries).max())


def spectral_ensemble(rho: DensityMatrix) -> Ensemble:
    """Eigen-decomposition ensemble, weights nonincreasing, zeros dropped."""
    eigs, vecs = np.linalg.eigh(rho.entries)
    members = []
    for k in range(len(eigs) - 1, -1, -1):  # eigh is ascending
        if eigs[k] < SPECTRAL_WEIGHT_DROP:
            break
        members.append((float(eigs[k]), PureState(rho.dim, vecs[:, k])))
    return Ensemble(tuple(members), rho.trace_weight)


def hjw_transform(e: Ensemble, u: Isometry) -> Ensemble:
    """Map an ensemble through sqrt(q_k)|phi_k> = sum_l U_lk sqrt(p_l)|psi_l>.

    Any two decompositions of the same state are related this way, so scanning
    isometries scans decompositions. Preserves the reconstructed state; members
    with weight below 1e-14 are dropped.
    """
    if u.rows != len(e.members):
        raise StateValidationError(
            "isometry has %d rows but the ensemble has %d members" % (u.rows, len(e.members))
        )
    b = np.array([math.sqrt(p) * psi.amplitudes for p, psi in e.members])
    w = u.entries.T @ b  # row k = sqrt(q_k) |phi_k>
    weights = np.sum(np.abs(w) ** 2, axis=1)
    members = []
    for k in range(w.shape[0]):
        q = float(weights[k])
        if q < ENSEMBLE_WEIGHT_DROP:
            continue
        members.append((q, PureState(w.shape[1], w[k] / math.sqrt(q))))
    return Ensemble(tuple(members), e.target_trace)
