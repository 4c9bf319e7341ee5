from __future__ import annotations

import numpy as np
import pytest

from exact_fa.classify.linalg import inv_sqrtm, rotate_lower_triangular, sqrtm_psd, symmetric_eigen


def test_eigen_matches_numpy(random_spd):
    rng = np.random.default_rng(11)
    for p in (2, 3, 5):
        matrix = random_spd(rng, p)
        values, vectors = symmetric_eigen(matrix)
        expected = np.linalg.eigvalsh(matrix)[::-1]
        assert np.allclose(values, expected, atol=1e-12)
        assert np.all(np.diff(values) <= 0)
        assert np.allclose(vectors.T @ vectors, np.eye(p), atol=1e-12)
        assert np.allclose(vectors @ np.diag(values) @ vectors.T, matrix, atol=1e-12)


def test_eigen_of_diagonal_matrix():
    values, _ = symmetric_eigen(np.diag([1.0, 3.0, 2.0]))
    assert values.tolist() == [3.0, 2.0, 1.0]


def test_eigen_rejects_bad_input():
    with pytest.raises(ValueError):
        symmetric_eigen(np.ones((2, 3)))
    with pytest.raises(ValueError):
        symmetric_eigen(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_square_roots(example1_array):
    root = sqrtm_psd(example1_array)
    assert np.allclose(root @ root, example1_array, atol=1e-12)
    inverse_root = inv_sqrtm(example1_array)
    assert np.allclose(inverse_root @ example1_array @ inverse_root, np.eye(3), atol=1e-12)
    with pytest.raises(np.linalg.LinAlgError):
        inv_sqrtm(np.diag([1.0, 0.0]))


def test_rotation_to_lower_triangular():
    rng = np.random.default_rng(5)
    loadings = rng.normal(size=(5, 2))
    rotated = rotate_lower_triangular(loadings)
    assert rotated[0, 1] == 0.0
    assert np.allclose(rotated @ rotated.T, loadings @ loadings.T, atol=1e-12)
    single = np.array([[0.3], [0.4]])
    assert np.array_equal(rotate_lower_triangular(single), single)
