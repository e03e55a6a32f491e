import math

import numpy as np
import pytest

from cohroof import (
    DensityMatrix,
    Ensemble,
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
from helpers import chain3_matrix, ginibre_density

PLUS = pure_state([1 / math.sqrt(2), 1 / math.sqrt(2)])


def test_validate_accepts_maximally_mixed():
    rho = validate_density(np.eye(2) / 2)
    assert rho.dim == 2
    assert rho.trace_weight == 1.0


def test_validate_accepts_random_wishart():
    rng = np.random.default_rng(0)
    for _ in range(50):
        n = rng.integers(2, 7)
        rho = ginibre_density(n, rng)
        assert rho.entries.shape == (n, n)


def test_validate_rejects_non_hermitian():
    with pytest.raises(NotHermitian) as err:
        validate_density([[0.5, 0.1], [0.3, 0.5]])
    assert err.value.position in ((0, 1), (1, 0))
    assert err.value.deviation == pytest.approx(0.2)


def test_validate_rejects_indefinite():
    with pytest.raises(NotPositiveSemidefinite) as err:
        validate_density([[0.5, 0.6], [0.6, 0.5]])
    assert err.value.eigenvalue == pytest.approx(-0.1, abs=1e-12)


def test_validate_rejects_chain3():
    # the 3-dim chain family has det = -x^2/27, so any nonzero coupling
    # pushes an eigenvalue below the floor
    for x in (0.25, 0.5, 1.0):
        with pytest.raises(NotPositiveSemidefinite):
            validate_density(chain3_matrix(x))


def test_validate_rejects_trace_mismatch():
    with pytest.raises(TraceMismatch):
        validate_density(np.eye(2) * 0.6)
    with pytest.raises(TraceMismatch):
        validate_density(np.eye(3) / 3, trace_weight=0.5)


def test_validate_trace_weight_domain():
    with pytest.raises(StateValidationError):
        validate_density(np.zeros((2, 2)), trace_weight=0.0)
    with pytest.raises(StateValidationError):
        validate_density(np.eye(2) * 0.6, trace_weight=1.2)
    sub = validate_density(np.eye(2) * 0.25, trace_weight=0.5)
    assert sub.trace_weight == 0.5


def test_validate_rejects_oversized_coupling():
    # coupling far above sqrt(d_i d_j); caught at the spectral gate, with
    # the 2x2 minor scan behind it as a backstop
    m = np.array([[1e-13, 2e-5], [2e-5, 1.0 - 1e-13]], dtype=complex)
    with pytest.raises(NotPositiveSemidefinite) as err:
        validate_density(m)
    assert err.value.eigenvalue is not None or err.value.minor is not None


def test_pure_state_norm_enforced():
    with pytest.raises(StateValidationError):
        pure_state([1.0, 0.5])
    psi = pure_state([1j, 0.0])
    assert psi.dim == 2


def test_basis_state():
    e1 = basis_state(3, 1)
    assert e1.amplitudes[1] == 1.0
    assert abs(e1.amplitudes[0]) == 0.0


def test_ensemble_weight_checks():
    with pytest.raises(StateValidationError):
        Ensemble(((0.0, basis_state(2, 0)), (1.0, basis_state(2, 1))))
    with pytest.raises(StateValidationError):
        Ensemble(((0.7, basis_state(2, 0)),))  # sums to 0.7, target 1
    e = Ensemble(((0.7, basis_state(2, 0)),), target_trace=0.7)
    assert e.target_trace == 0.7


def test_ensemble_to_state_examples():
    pure = ensemble_to_state(Ensemble(((1.0, basis_state(2, 0)),)))
    assert np.allclose(pure.entries, [[1, 0], [0, 0]])

    mixed = ensemble_to_state(
        Ensemble(((0.5, PLUS), (0.5, basis_state(2, 1))))
    )
    assert np.allclose(mixed.entries, [[0.25, 0.25], [0.25, 0.75]], atol=1e-15)

    uniform = ensemble_to_state(
        Ensemble(((0.5, basis_state(2, 0)), (0.5, basis_state(2, 1))))
    )
    assert np.allclose(uniform.entries, np.eye(2) / 2)


def test_spectral_ensemble_diagonal():
    rho = validate_density(np.diag([0.3, 0.7]).astype(complex))
    ens = spectral_ensemble(rho)
    weights = [p for p, _ in ens.members]
    assert weights == [0.7, 0.3]  # nonincreasing
    assert reconstruction_error(ens, rho) < 1e-12


def test_spectral_ensemble_rank_one():
    rho = validate_density(PLUS.projector())
    ens = spectral_ensemble(rho)
    assert len(ens.members) == 1
    assert ens.members[0][0] == pytest.approx(1.0, abs=1e-12)


def test_spectral_ensemble_closed_form_weights():
    # eigenvalues of [[1/4,1/4],[1/4,3/4]] are (2 +- sqrt(2))/4
    rho = validate_density([[0.25, 0.25], [0.25, 0.75]])
    ens = spectral_ensemble(rho)
    expected = [(2 + math.sqrt(2)) / 4, (2 - math.sqrt(2)) / 4]
    got = [p for p, _ in ens.members]
    assert got == pytest.approx(expected, abs=1e-14)
    assert reconstruction_error(ens, rho) < 1e-14


def test_spectral_ensemble_random_reconstructs():
    rng = np.random.default_rng(1)
    for _ in range(50):
        n = int(rng.integers(2, 7))
        rho = ginibre_density(n, rng)
        ens = spectral_ensemble(rho)
        assert reconstruction_error(ens, rho) < 1e-10
        weights = [p for p, _ in ens.members]
        assert all(a >= b for a, b in zip(weights, weights[1:]))
        assert math.fsum(weights) == pytest.approx(rho.trace_weight, abs=1e-10)


def test_isometry_checks():
    with pytest.raises(NotIsometry):
        Isometry(2, 2, [[1.0, 0.1], [0.0, 1.0]])
    with pytest.raises(StateValidationError):
        Isometry(3, 2, np.zeros((3, 2)))
    u = Isometry(1, 2, [[1 / math.sqrt(2), 1j / math.sqrt(2)]])
    assert u.cols == 2


def test_hjw_identity_is_noop():
    rho = validate_density([[0.25, 0.25], [0.25, 0.75]])
    ens = spectral_ensemble(rho)
    same = hjw_transform(ens, Isometry(2, 2, np.eye(2)))
    for (p, psi), (q, phi) in zip(ens.members, same.members):
        assert p == pytest.approx(q, abs=1e-14)
        assert np.allclose(psi.amplitudes, phi.amplitudes, atol=1e-14)


def test_hjw_hadamard_swaps_basis_for_plus_minus():
    h = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    ens = Ensemble(((0.5, basis_state(2, 0)), (0.5, basis_state(2, 1))))
    out = hjw_transform(ens, Isometry(2, 2, h))
    rho = ensemble_to_state(ens)
    assert reconstruction_error(out, rho) < 1e-14
    mags = sorted(abs(out.members[0][1].amplitudes))
    assert mags == pytest.approx([1 / math.sqrt(2)] * 2)


def test_hjw_split_pure_into_copies():
    ens = Ensemble(((1.0, PLUS),))
    u = Isometry(1, 2, [[1 / math.sqrt(2), 1 / math.sqrt(2)]])
    out = hjw_transform(ens, u)
    assert len(out.members) == 2
    for p, psi in out.members:
        assert p == pytest.approx(0.5, abs=1e-14)
        assert np.allclose(psi.amplitudes, PLUS.amplitudes)


def test_hjw_row_mismatch():
    ens = Ensemble(((1.0, PLUS),))
    with pytest.raises(StateValidationError):
        hjw_transform(ens, Isometry(2, 2, np.eye(2)))


def test_hjw_preserves_state_randomized():
    from cohroof import random_isometry

    rng = np.random.default_rng(2)
    for _ in range(60):
        n = int(rng.integers(2, 7))
        rho = ginibre_density(n, rng)
        ens = spectral_ensemble(rho)
        rank = len(ens.members)
        m = int(rng.integers(rank, 13))
        out = hjw_transform(ens, random_isometry(rank, m, rng))
        assert reconstruction_error(out, rho) < 1e-10
        assert math.fsum(p for p, _ in out.members) == pytest.approx(1.0, abs=1e-10)


def test_density_matrix_storage_is_read_only():
    rho = validate_density(np.eye(2) / 2)
    with pytest.raises(ValueError):
        rho.entries[0, 0] = 9.0
