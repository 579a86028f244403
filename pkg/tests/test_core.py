"""Kernel tests: norms, products, sampling, QR, SVD, pseudoinverse."""

import math

import numpy as np
import pytest

from randlr.core import (
    SingularSpectrum,
    as_matrix,
    derive_seed,
    frobenius_norm,
    gaussian_matrix,
    matmul,
    pseudoinverse,
    singular_values,
    svd_factors,
    thin_qr,
)


def manual_frobenius(M):
    """Independent oracle: explicit python-level sum of squares."""
    total = 0.0
    for row in M:
        for x in row:
            total += float(x) * float(x)
    return math.sqrt(total)


def triple_loop_matmul(A, B):
    """Independent oracle: naive three-loop product."""
    out = np.zeros((A.shape[0], B.shape[1]))
    for i in range(A.shape[0]):
        for j in range(B.shape[1]):
            acc = 0.0
            for k in range(A.shape[1]):
                acc += A[i, k] * B[k, j]
            out[i, j] = acc
    return out


# --- as_matrix -------------------------------------------------------------


def test_as_matrix_rejects_bad_input():
    with pytest.raises(ValueError):
        as_matrix([1.0, 2.0])  # 1-D
    with pytest.raises(ValueError):
        as_matrix([[1.0, np.nan]])
    with pytest.raises(ValueError):
        as_matrix([[1.0, np.inf]])
    with pytest.raises(ValueError):
        as_matrix(np.zeros((0, 3)))


def test_as_matrix_copies_and_casts():
    src = np.array([[1, 2], [3, 4]], dtype=np.int64)
    M = as_matrix(src)
    assert M.dtype == np.float64
    M[0, 0] = 99.0
    assert src[0, 0] == 1


# --- frobenius_norm --------------------------------------------------------


def test_frobenius_345_triangle():
    assert frobenius_norm(np.array([[3.0], [4.0]])) == pytest.approx(5.0, abs=1e-14)


def test_frobenius_identity_and_zero():
    assert frobenius_norm(np.eye(2)) == pytest.approx(math.sqrt(2.0), abs=1e-14)
    assert frobenius_norm(np.zeros((4, 7))) == 0.0


def test_frobenius_matches_manual_sum():
    rng = np.random.default_rng(101)
    for _ in range(5):
        M = rng.standard_normal((6, 9))
        assert frobenius_norm(M) == pytest.approx(manual_frobenius(M), rel=1e-13)


# --- matmul ----------------------------------------------------------------


def test_matmul_identity():
    rng = np.random.default_rng(5)
    A = rng.standard_normal((3, 3))
    assert np.array_equal(matmul(np.eye(3), A), A)


def test_matmul_small_example():
    A = np.array([[1.0, 2.0], [3.0, 4.0]])
    B = np.array([[1.0], [1.0]])
    assert np.array_equal(matmul(A, B), np.array([[3.0], [7.0]]))


def test_matmul_matches_triple_loop():
    rng = np.random.default_rng(17)
    A = rng.standard_normal((5, 4))
    B = rng.standard_normal((4, 6))
    assert np.abs(matmul(A, B) - triple_loop_matmul(A, B)).max() <= 1e-12


def test_matmul_dimension_mismatch():
    with pytest.raises(ValueError):
        matmul(np.zeros((2, 3)), np.zeros((2, 3)))


# --- gaussian_matrix / derive_seed -----------------------------------------


def test_gaussian_deterministic_per_seed():
    A = gaussian_matrix(13, 7, 424242)
    B = gaussian_matrix(13, 7, 424242)
    assert np.array_equal(A, B)


def test_gaussian_distinct_seeds_differ():
    assert not np.array_equal(gaussian_matrix(8, 8, 1), gaussian_matrix(8, 8, 2))


def test_gaussian_moments():
    Z = gaussian_matrix(400, 250, 2024)
    # 3-sigma CLT windows for 100k samples
    assert abs(Z.mean()) <= 0.02
    assert abs(Z.var() - 1.0) <= 0.03
    assert np.isfinite(Z).all()


def test_gaussian_rejects_bad_dims():
    with pytest.raises(ValueError):
        gaussian_matrix(0, 3, 1)


def test_derive_seed_fixed_mixing():
    assert derive_seed(42, 7) == derive_seed(42, 7)
    seeds = {derive_seed(42, i) for i in range(64)}
    assert len(seeds) == 64
    assert derive_seed(42, 0) != derive_seed(43, 0)


def test_gaussian_substreams_independent():
    a = gaussian_matrix(4, 4, derive_seed(9, 0))
    b = gaussian_matrix(4, 4, derive_seed(9, 1))
    assert not np.array_equal(a, b)


# --- thin_qr ----------------------------------------------------------------


def test_qr_345_column():
    Q, R = thin_qr(np.array([[3.0], [4.0]]))
    # the non-negative-diagonal convention pins the signs
    assert np.allclose(Q, [[0.6], [0.8]], atol=1e-15)
    assert np.allclose(R, [[5.0]], atol=1e-14)


def test_qr_of_orthonormal_is_identityish():
    rng = np.random.default_rng(31)
    Q0, _ = thin_qr(rng.standard_normal((10, 4)))
    Q, R = thin_qr(Q0)
    assert np.allclose(Q, Q0, atol=1e-13)
    assert np.allclose(R, np.eye(4), atol=1e-13)


def test_qr_reconstruction_and_orthonormality():
    rng = np.random.default_rng(77)
    M = rng.standard_normal((20, 8))
    Q, R = thin_qr(M)
    assert frobenius_norm(Q.T @ Q - np.eye(8)) <= 1e-12
    assert frobenius_norm(Q @ R - M) <= 1e-10 * frobenius_norm(M)
    assert np.array_equal(R, np.triu(R))
    assert (np.diag(R) >= 0).all()


def test_qr_rank_deficient_stays_orthonormal():
    rng = np.random.default_rng(3)
    M = rng.standard_normal((12, 5))
    M[:, 3] = M[:, 1]  # duplicate column
    Q, R = thin_qr(M)
    assert frobenius_norm(Q.T @ Q - np.eye(5)) <= 1e-12
    assert frobenius_norm(Q @ R - M) <= 1e-10 * frobenius_norm(M)


def test_qr_rejects_wide():
    with pytest.raises(ValueError):
        thin_qr(np.zeros((3, 5)))


# --- singular values / svd_factors ------------------------------------------


def test_singular_values_diagonal():
    spec = singular_values(np.diag([3.0, 1.0]))
    assert np.allclose(spec.values, [3.0, 1.0], atol=1e-14)


def test_singular_values_zero_matrix():
    spec = singular_values(np.zeros((4, 3)))
    assert np.array_equal(spec.values, np.zeros(3))
    assert spec.source_dims == (4, 3)


def test_singular_values_golden_ratio():
    # eigenvalues of M^T M for [[1,1],[0,1]] solve x^2 - 3x + 1 = 0,
    # so the singular values are (1 +/- sqrt(5))/2 in absolute value
    spec = singular_values(np.array([[1.0, 1.0], [0.0, 1.0]]))
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    assert spec.values == pytest.approx([phi, phi - 1.0], rel=1e-12)


@pytest.mark.parametrize("shape", [(9, 6), (6, 9), (15, 15)])
def test_singular_values_match_lapack(shape):
    rng = np.random.default_rng(sum(shape))
    M = rng.standard_normal(shape)
    mine = singular_values(M).values
    ref = np.linalg.svd(M, compute_uv=False)
    assert np.abs(mine - ref).max() <= 1e-12 * ref[0]


def test_spectrum_energy_matches_frobenius():
    rng = np.random.default_rng(55)
    for _ in range(5):
        M = rng.standard_normal((rng.integers(2, 30), rng.integers(2, 30)))
        spec = singular_values(M)
        assert spec.total_energy() == pytest.approx(frobenius_norm(M) ** 2, rel=1e-10)


@pytest.mark.parametrize("shape", [(12, 7), (7, 12)])
def test_svd_factors_reconstruct(shape):
    rng = np.random.default_rng(7)
    M = rng.standard_normal(shape)
    U, vals, Vt = svd_factors(M)
    k = min(shape)
    assert U.shape == (shape[0], k) and Vt.shape == (k, shape[1])
    assert frobenius_norm(U.T @ U - np.eye(k)) <= 1e-12
    assert frobenius_norm(Vt @ Vt.T - np.eye(k)) <= 1e-12
    assert frobenius_norm((U * vals) @ Vt - M) <= 1e-12 * frobenius_norm(M)
    assert (np.diff(vals) <= 0).all()


def test_svd_factors_rank_deficient_basis_complete():
    M = np.zeros((6, 4))
    M[:, 0] = [1.0, 2.0, 3.0, 0.0, 0.0, 0.0]
    U, vals, Vt = svd_factors(M)
    assert frobenius_norm(U.T @ U - np.eye(4)) <= 1e-12
    assert vals[0] == pytest.approx(math.sqrt(14.0), rel=1e-14)
    assert np.allclose(vals[1:], 0.0)


def test_svd_does_not_mutate_input():
    rng = np.random.default_rng(13)
    M = rng.standard_normal((8, 11))
    before = M.copy()
    svd_factors(M)
    singular_values(M)
    svd_factors(M.T)
    assert np.array_equal(M, before)


# --- SingularSpectrum validation ---------------------------------------------


def test_spectrum_validation():
    SingularSpectrum(values=np.array([2.0, 1.0]), source_dims=(3, 2))
    with pytest.raises(ValueError):
        SingularSpectrum(values=np.array([1.0, 2.0]), source_dims=(3, 2))  # increasing
    with pytest.raises(ValueError):
        SingularSpectrum(values=np.array([-1.0]), source_dims=(3, 2))
    with pytest.raises(ValueError):
        SingularSpectrum(values=np.array([1.0, 1.0, 1.0]), source_dims=(3, 2))  # too long


# --- pseudoinverse -----------------------------------------------------------


def test_pinv_diagonal_with_zero():
    P = pseudoinverse(np.diag([2.0, 0.0]))
    assert np.allclose(P, np.diag([0.5, 0.0]), atol=1e-14)


def test_pinv_of_orthonormal_is_transpose():
    rng = np.random.default_rng(12)
    Q, _ = thin_qr(rng.standard_normal((9, 4)))
    assert np.allclose(pseudoinverse(Q), Q.T, atol=1e-12)


def test_pinv_moore_penrose_identities():
    rng = np.random.default_rng(40)
    M = rng.standard_normal((6, 4))
    P = pseudoinverse(M)
    assert frobenius_norm(M @ P @ M - M) <= 1e-10
    assert frobenius_norm(P @ M @ P - P) <= 1e-10
    assert frobenius_norm((M @ P).T - M @ P) <= 1e-10
    assert frobenius_norm((P @ M).T - P @ M) <= 1e-10


def test_pinv_involution_on_full_rank():
    rng = np.random.default_rng(41)
    M = rng.standard_normal((7, 5))
    back = pseudoinverse(pseudoinverse(M))
    assert frobenius_norm(back - M) <= 1e-8 * frobenius_norm(M)


def test_pinv_zero_matrix():
    assert np.array_equal(pseudoinverse(np.zeros((3, 5))), np.zeros((5, 3)))
