import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from catalytic.quantum import (
    DensityMatrix, LinalgError, apply_local, check_unitary, embed_operator, hermitian_eig, min_eigenvalue,
    partial_trace, random_density_matrix, random_unitary, tensor_q, trace_distance, unitarity_error,
)


def test_plus_projector_eigenvalues():
    h = 0.5 * np.array([[1, 1], [1, 1]])
    spec = hermitian_eig(h, method="jacobi")
    assert np.allclose(spec.eigenvalues, [1.0, 0.0], atol=1e-14)
    v = spec.eigenvectors[:, 0]
    assert np.allclose(v, [2**-0.5, 2**-0.5])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_jacobi_reconstructs(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = a + a.conj().T
    spec = hermitian_eig(h, method="jacobi")
    assert np.linalg.norm(spec.reconstruct() - h) <= 1e-10 * max(1.0, np.linalg.norm(h))
    assert np.all(np.diff(spec.eigenvalues) <= 1e-12)
    assert unitarity_error(spec.eigenvectors) <= 1e-10


def test_jacobi_matches_lapack():
    rng = np.random.default_rng(1)
    rho = random_density_matrix(9, rng)
    a = hermitian_eig(rho.matrix, method="jacobi").eigenvalues
    b = hermitian_eig(rho.matrix, method="lapack").eigenvalues
    assert np.allclose(a, b, atol=1e-12)


def test_non_hermitian_rejected():
    with pytest.raises(LinalgError):
        hermitian_eig(np.array([[0, 1], [0, 0]]))


def test_density_matrix_validation():
    with pytest.raises(LinalgError):
        DensityMatrix(np.diag([0.7, 0.7]))
    with pytest.raises(LinalgError):
        DensityMatrix(np.diag([1.2, -0.2]))
    with pytest.raises(LinalgError):
        DensityMatrix(np.eye(4) / 4, dims=[3, 2])


def test_min_eigenvalue_of_tensor_with_maximally_mixed():
    cold = DensityMatrix.from_diagonal([0.97, 0.03])
    assert min_eigenvalue(tensor_q(cold, DensityMatrix.maximally_mixed(2))) == pytest.approx(0.015, abs=1e-14)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 4), st.integers(2, 3), st.integers(0, 2**32 - 1))
def test_partial_trace_of_product(da, db, seed):
    rng = np.random.default_rng(seed)
    a, b = random_density_matrix(da, rng), random_density_matrix(db, rng)
    ab = tensor_q(a, b)
    assert trace_distance(partial_trace(ab, [0]).matrix, a.matrix) <= 1e-12
    assert trace_distance(partial_trace(ab, [1]).matrix, b.matrix) <= 1e-12


def test_apply_local_matches_embedded_operator():
    rng = np.random.default_rng(7)
    rho = tensor_q(random_density_matrix(2, rng), random_density_matrix(3, rng), random_density_matrix(2, rng))
    u = random_unitary(4, rng)
    full = embed_operator(u, rho.dims, [2, 0])
    direct = full @ rho.matrix @ full.conj().T
    assert np.abs(apply_local(rho, u, [2, 0]).matrix - direct).max() <= 1e-13


def test_check_unitary():
    rng = np.random.default_rng(0)
    check_unitary(random_unitary(5, rng))
    with pytest.raises(LinalgError):
        check_unitary(2 * np.eye(2))


def test_trace_distance_half_l1():
    a, b = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
    assert trace_distance(a, b) == pytest.approx(1.0)
