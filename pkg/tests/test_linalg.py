import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sacr.errors import GridTooShort, NotPositiveDefinite
from sacr.linalg import apply_second_difference, cholesky_solve, second_difference_operator

from conftest import gaussian_elimination_solve


def test_identity_solve():
    b = np.array([1.0, -2.0, 3.5])
    np.testing.assert_array_equal(cholesky_solve(np.eye(3), b), b)


def test_diagonal_solve():
    np.testing.assert_allclose(cholesky_solve(np.diag([2.0, 4.0]), [2.0, 4.0]), [1.0, 1.0])


def test_matches_gaussian_elimination(rng):
    M = rng.normal(size=(5, 5))
    A = M.T @ M + np.eye(5)
    B = rng.normal(size=(5, 2))
    X = cholesky_solve(A, B)
    np.testing.assert_allclose(X, gaussian_elimination_solve(A, B), rtol=1e-10, atol=1e-12)
    assert np.max(np.abs(A @ X - B)) <= 1e-8 * (1 + np.max(np.abs(B)))


@pytest.mark.parametrize("n", [1, 10, 50, 200])
def test_recovers_solution(rng, n):
    M = rng.normal(size=(n + 5, n))
    A = M.T @ M + 1e-3 * np.eye(n)
    x = rng.normal(size=n)
    got = cholesky_solve(A, A @ x)
    assert np.max(np.abs(got - x)) <= 1e-8 * np.max(np.abs(x))


def test_singular_matrix_rejected():
    with pytest.raises(NotPositiveDefinite):
        cholesky_solve(np.array([[1.0, 1.0], [1.0, 1.0]]), [1.0, 1.0])


def test_indefinite_rejected():
    with pytest.raises(NotPositiveDefinite):
        cholesky_solve(np.diag([1.0, -1.0]), [1.0, 1.0])


def test_asymmetric_rejected():
    with pytest.raises(ValueError):
        cholesky_solve(np.array([[2.0, 1.0], [0.0, 2.0]]), [1.0, 1.0])


def test_operator_p4():
    np.testing.assert_array_equal(
        second_difference_operator(4), [[1, -2, 1, 0], [0, 1, -2, 1]]
    )


def test_operator_examples():
    assert second_difference_operator(3) @ np.array([1.0, 2.0, 3.0]) == pytest.approx([0.0])
    np.testing.assert_array_equal(
        second_difference_operator(5) @ np.array([0, 0, 1.0, 0, 0]), [1, -2, 1]
    )


def test_grid_too_short():
    with pytest.raises(GridTooShort):
        second_difference_operator(2)


@settings(max_examples=50, deadline=None)
@given(
    p=st.integers(3, 60),
    a=st.integers(-1000, 1000),
    b=st.integers(-1000, 1000),
)
def test_affine_annihilated_exactly(p, a, b):
    v = a + b * np.arange(p, dtype=float)
    assert np.all(second_difference_operator(p) @ v == 0.0)
    assert np.all(apply_second_difference(v) == 0.0)


@pytest.mark.parametrize("p", [3, 7, 40])
def test_gram_is_psd(p):
    L = second_difference_operator(p)
    G = L.T @ L
    np.testing.assert_array_equal(G, G.T)
    np.linalg.cholesky(G + 1e-12 * np.eye(p))
    # rows hold exactly three consecutive nonzeros
    for r, row in enumerate(L):
        nz = np.flatnonzero(row)
        np.testing.assert_array_equal(nz, [r, r + 1, r + 2])
        np.testing.assert_array_equal(row[nz], [1, -2, 1])


def test_banded_product_matches_dense(rng):
    v = rng.normal(size=20)
    np.testing.assert_allclose(apply_second_difference(v), second_difference_operator(20) @ v)
