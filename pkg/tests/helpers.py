"""Shared generators and fixtures for the test suite."""

import json
import math
import os

import numpy as np

from cohroof import validate_density

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")

# rank-2 3-dim state whose convex roof sits visibly above its l1 value;
# entries frozen so the observed gap is reproducible
GAP3 = np.array([
    [0.28093439680965016 + 0.0j,
     -0.1277079742147928 + 0.10997749340771354j,
     0.14309711908936523 + 0.16202453160315644j],
    [-0.1277079742147928 - 0.10997749340771354j,
     0.2716764654886259 + 0.0j,
     0.16472736602555743 + 0.012692446615166789j],
    [0.14309711908936523 - 0.16202453160315644j,
     0.16472736602555743 - 0.012692446615166789j,
     0.44738913770172406 + 0.0j],
])

# l1 of GAP3, kept as a literal so tests catch accidental edits to the state
GAP3_L1 = 1.0998398104986409


def ginibre_density(n, rng, rank=None):
    """Random full(ish)-rank density matrix from a complex Wishart draw."""
    k = rank if rank is not None else n
    g = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    m = g @ g.conj().T
    # fused matmul leaves opposite triangles an ulp apart; make the
    # conjugate symmetry bitwise so permutation tests can demand equality
    m = (m + m.conj().T) / 2.0
    m /= m.trace().real
    return validate_density(m)


def random_x_matrix(n, rng, coupling=0.98):
    d = rng.dirichlet(np.ones(n))
    m = np.diag(d.astype(complex))
    for i in range(n // 2):
        j = n - 1 - i
        u = rng.uniform(0.0, coupling)
        ph = rng.uniform(0.0, 2.0 * np.pi)
        m[i, j] = u * math.sqrt(d[i] * d[j]) * np.exp(1j * ph)
        m[j, i] = np.conj(m[i, j])
    return m


def random_x_state(n, rng, coupling=0.98):
    return validate_density(random_x_matrix(n, rng, coupling))


def random_qubit(rng):
    return ginibre_density(2, rng)


def qubit_assembly(rng, nblocks):
    """Direct sum of random qubit blocks under a random basis permutation.

    Returns (state, block matrices, weights, permutation) where
    permutation[new_index] = position in the unpermuted direct sum.
    """
    weights = rng.dirichlet(np.ones(nblocks))
    blocks = []
    n = 2 * nblocks
    m = np.zeros((n, n), dtype=complex)
    for b in range(nblocks):
        g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        sub = g @ g.conj().T
        sub = (sub + sub.conj().T) / 2.0
        sub *= weights[b] / sub.trace().real
        blocks.append(sub)
        m[2 * b: 2 * b + 2, 2 * b: 2 * b + 2] = sub
    perm = rng.permutation(n)
    return validate_density(m[np.ix_(perm, perm)]), blocks, weights, perm


def random_permutation_of(rho, rng):
    perm = rng.permutation(rho.dim)
    return validate_density(rho.entries[np.ix_(perm, perm)]), perm


def write_state_file(path, matrix, label=None):
    m = np.asarray(matrix, dtype=complex)
    doc = {"dim": m.shape[0],
           "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in m]}
    if label is not None:
        doc["label"] = label
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")
    return path


def chain3_matrix(x):
    """The 3-dim chain family (1/3)[[1,0,1],[0,1,x],[1,x,1]]; not PSD for x != 0."""
    return np.array([[1.0, 0.0, 1.0],
                     [0.0, 1.0, x],
                     [1.0, x, 1.0]], dtype=complex) / 3.0
