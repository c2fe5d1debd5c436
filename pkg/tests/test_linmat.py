import numpy as np
import pytest

from qcdisc import linmat as lm
from qcdisc import sampling as sp
from qcdisc.exceptions import QcdError


def test_eig_identity_and_pauli_z():
    w, _ = lm.herm_eig(np.eye(3))
    assert np.allclose(w, 1.0)
    w, V = lm.herm_eig(np.diag([1.0, -1.0]))
    assert np.allclose(w, [1, -1])  # descending
    assert np.allclose(np.abs(V), np.eye(2))


def test_eig_reconstruction(rng):
    M = sp.random_hermitian(5, rng)
    w, V = lm.herm_eig(M)
    assert np.abs(lm.reconstruct(w, V) - M).max() < 1e-9


def test_non_hermitian_rejected():
    with pytest.raises(QcdError):
        lm.herm_eig(np.array([[0, 1], [0, 0]], dtype=complex))


def test_mat_fn_square_and_support_only():
    assert np.allclose(lm.mat_fn(np.diag([2.0, 3.0]), np.square), np.diag([4, 9]))
    out = lm.mat_fn(np.diag([1.0, 0.0]), np.log2, support_only=True)
    assert np.allclose(out, 0)


def test_pseudo_inverse_sqrt(rng):
    P = sp.random_psd(4, rng, rank=3)
    inv_sqrt = lm.mat_fn(P, lambda x: x**-0.5, support_only=True)
    sqrt = lm.sqrtm_psd(P)
    assert np.allclose(sqrt @ inv_sqrt, lm.support_projector(P), atol=1e-9)


def test_kron_examples(rng):
    assert np.allclose(lm.kron(np.eye(2), np.eye(2)), np.eye(4))
    z = np.diag([1.0, -1.0])
    assert np.allclose(lm.kron(np.diag([1.0, 0.0]), z), np.diag([1, -1, 0, 0]))
    A, B = sp.ginibre(2, 2, rng), sp.ginibre(2, 2, rng)
    K = lm.kron(A, B)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for l in range(2):
                    assert np.isclose(K[2 * i + k, 2 * j + l], A[i, j] * B[k, l])


def test_partial_trace(rng):
    rho, sigma = sp.random_state(2, rng), sp.random_psd(3, rng)
    assert np.allclose(lm.partial_trace(np.kron(rho, sigma), [0], [2, 3]), rho * np.trace(sigma))
    phi = lm.maximally_entangled(3)
    assert np.allclose(lm.partial_trace(phi, [1], [3, 3]), np.eye(3) / 3)
    big = sp.random_state(6, rng)
    T = big.reshape(2, 3, 2, 3)
    brute = np.zeros((3, 3), dtype=complex)
    for a in range(2):
        brute += T[a, :, a, :]
    assert np.allclose(lm.partial_trace(big, [1], [2, 3]), brute)


def test_permutation_unitary(rng):
    x, y, z = sp.random_pure(2, rng), sp.random_pure(3, rng), sp.random_pure(2, rng)
    P = lm.permutation_unitary([2, 3, 2], [2, 0, 1])
    assert np.allclose(P @ lm.kron(x, y, z), lm.kron(z, x, y))


def test_schatten_norms(rng):
    assert np.isclose(lm.schatten_norm(np.eye(4), 1), 4)
    assert np.isclose(lm.schatten_norm(np.array([[0, 1], [1, 0]]), np.inf), 1)
    M = sp.ginibre(3, 3, rng)
    assert np.isclose(lm.schatten_norm(M, 2), np.sqrt(np.sum(np.abs(M) ** 2)))


def test_support_projector(rng):
    assert np.allclose(lm.support_projector(sp.random_state(3, rng)), np.eye(3))
    z = np.diag([1.0, 0.0])
    assert np.allclose(lm.support_projector(z), z)
    M = sp.random_psd(4, rng, rank=2)
    P = lm.support_projector(M)
    assert np.linalg.matrix_rank(P, tol=1e-8) == 2
    assert np.abs(P @ M @ P - M).max() < 1e-9


def test_density_repair():
    rho = np.diag([1.0 + 5e-11, -5e-11])
    fixed = lm.as_density_matrix(rho)
    assert np.linalg.eigvalsh(fixed)[0] >= 0
    with pytest.raises(QcdError):
        lm.as_density_matrix(np.diag([1.1, -0.1]))
