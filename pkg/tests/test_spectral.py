import numpy as np
import pytest

from oracles import power_iteration_eigs
from trajkit import (
    MatrixId,
    TrajectoryStore,
    jacobi_eigenvalues,
    symmetric_eigenvalues,
    trajectory_spectra,
)
from trajkit.errors import NotSymmetric

from conftest import random_store


def random_symmetric(rng, n):
    m = rng.standard_normal((n, n))
    return 0.5 * (m + m.T)


def test_identity_spectrum():
    np.testing.assert_array_equal(jacobi_eigenvalues(np.eye(4)), np.ones(4))


def test_two_by_two_known():
    eigs = jacobi_eigenvalues(np.array([[2.0, 1.0], [1.0, 2.0]]))
    np.testing.assert_allclose(eigs, [3.0, 1.0], atol=1e-14)


def test_diagonal_matrix_sorted():
    eigs = jacobi_eigenvalues(np.diag([1.0, 5.0, -2.0]))
    np.testing.assert_array_equal(eigs, [5.0, 1.0, -2.0])


def test_one_by_one():
    np.testing.assert_array_equal(jacobi_eigenvalues(np.array([[7.0]])), [7.0])


def test_matches_power_iteration_oracle(rng):
    for _ in range(25):
        n = int(rng.integers(2, 13))
        m = random_symmetric(rng, n)
        got = symmetric_eigenvalues(m).eigenvalues
        want = power_iteration_eigs(m)
        assert np.max(np.abs(got - want)) <= 1e-9


def test_trace_preserved(rng):
    for _ in range(20):
        m = random_symmetric(rng, int(rng.integers(2, 10)))
        eigs = symmetric_eigenvalues(m).eigenvalues
        assert abs(eigs.sum() - np.trace(m)) <= 1e-9 * max(np.linalg.norm(m), 1.0)


def test_rotation_invariance(rng):
    m = np.diag([4.0, 2.0, 1.0, 0.5])
    q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    eigs = symmetric_eigenvalues(q @ m @ q.T).eigenvalues
    np.testing.assert_allclose(eigs, [4.0, 2.0, 1.0, 0.5], atol=1e-12)


def test_not_symmetric_raises():
    with pytest.raises(NotSymmetric):
        symmetric_eigenvalues(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(NotSymmetric):
        symmetric_eigenvalues(np.ones((2, 3)))


# --- trajectory spectra ---


def test_spectra_orthonormal_pair():
    store = TrajectoryStore.from_arrays([[1.0, 0.0], [0.0, 1.0]])
    spectra = trajectory_spectra(store)
    np.testing.assert_allclose(spectra[MatrixId.K].eigenvalues, [1.0, 1.0], atol=1e-12)
    np.testing.assert_allclose(spectra[MatrixId.C].eigenvalues, [1.0, 1.0], atol=1e-12)


def test_spectra_linear_path_rank_one():
    pts = np.outer(np.arange(1.0, 6.0), [1.0, 2.0])
    spectra = trajectory_spectra(store := TrajectoryStore.from_arrays(pts))
    c = spectra[MatrixId.C].eigenvalues
    # perfectly aligned trajectory: C = ones, spectrum [n, 0, ..., 0]
    np.testing.assert_allclose(c, [5.0, 0.0, 0.0, 0.0, 0.0], atol=1e-12)
    k = spectra[MatrixId.K].eigenvalues
    assert k[0] > 0 and np.max(np.abs(k[1:])) <= 1e-10 * k[0]
    assert store.n_points == 5


def test_cosine_spectrum_sums_to_n(rng):
    for _ in range(10):
        n = int(rng.integers(2, 9))
        store = random_store(rng, n, 30)
        spectra = trajectory_spectra(store)
        for mid in (MatrixId.C, MatrixId.C0):
            eigs = spectra[mid].eigenvalues
            expect = eigs.shape[0]
            assert abs(eigs.sum() - expect) <= 1e-8 * expect


def test_gram_spectra_nonnegative(rng):
    spectra = trajectory_spectra(random_store(rng, 7, 40))
    assert np.all(spectra[MatrixId.K].eigenvalues >= 0.0)
    assert np.all(spectra[MatrixId.K0].eigenvalues >= 0.0)


def test_rank_bounded_by_ambient_dim(rng):
    # 6 points in a 2-dimensional space: at most 2 nonzero Gram eigenvalues
    store = random_store(rng, 6, 2)
    eigs = trajectory_spectra(store)[MatrixId.K].eigenvalues
    assert np.max(np.abs(eigs[2:])) <= 1e-9 * eigs[0]


def test_relative_spectra_have_n_minus_one_rows(rng):
    spectra = trajectory_spectra(random_store(rng, 5, 20))
    assert spectra[MatrixId.K0].n == 4
    assert spectra[MatrixId.C0].n == 4
    assert spectra[MatrixId.K].n == 5
