import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_dominant_tridiagonal
from fdci.linalg import (
    BandedCholeskyFactor,
    BandedMatrix,
    NotPositiveDefiniteError,
    SingularMatrixError,
    band_matvec,
    banded_cholesky,
    banded_solve,
    dense_solve,
    gram_factor,
    normal_equations,
    solve_lower_banded,
    solve_upper_banded,
    thomas_solve,
)


def laplacian_stencil(m: int) -> BandedMatrix:
    """Tridiagonal with -2 on the diagonal and 1 off it."""
    return BandedMatrix.tridiagonal(np.ones(m - 1), np.full(m, -2.0), np.ones(m - 1))


class TestBandedMatrix:
    def test_entry_and_dense_roundtrip(self, np_rng):
        A = random_dominant_tridiagonal(np_rng, 6)
        D = A.to_dense()
        for i in range(6):
            for j in range(6):
                assert A.entry(i, j) == D[i, j]
        B = BandedMatrix.from_dense(D, 1, 1)
        assert np.array_equal(B.bands, A.bands)

    def test_from_dense_rejects_outside_band(self):
        D = np.eye(4)
        D[0, 3] = 1.0
        with pytest.raises(ValueError):
            BandedMatrix.from_dense(D, 1, 1)

    def test_bandwidth_invariants(self):
        with pytest.raises(ValueError):
            BandedMatrix.zeros(2, 2, 2)  # kl+ku+1 > 2n-1
        with pytest.raises(ValueError):
            BandedMatrix.zeros(0, 0, 0)

    def test_scaled(self):
        A = laplacian_stencil(4)
        assert np.allclose(A.scaled(0.5).to_dense(), 0.5 * A.to_dense())


class TestBandMatvec:
    def test_identity(self):
        A = BandedMatrix.identity(3)
        v = np.array([1.0, 2.0, 3.0])
        assert np.array_equal(band_matvec(A, v), v)

    def test_laplacian_m3(self):
        # hand multiplication of the 3x3 stencil against (1,1,1)
        got = band_matvec(laplacian_stencil(3), np.ones(3))
        assert np.array_equal(got, np.array([-1.0, 0.0, -1.0]))

    def test_against_dense_oracle(self, np_rng):
        A = random_dominant_tridiagonal(np_rng, 10)
        v = np_rng.standard_normal(10)
        assert np.max(np.abs(band_matvec(A, v) - A.to_dense() @ v)) <= 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            band_matvec(BandedMatrix.identity(3), np.ones(4))


class TestThomasSolve:
    def test_identity(self):
        A = BandedMatrix.identity(2, 1, 1)
        assert np.array_equal(thomas_solve(A, np.array([4.0, 5.0])), np.array([4.0, 5.0]))

    def test_linear_bvp_system_m3(self):
        # A x = h^2 F for the u''=sin(x) scheme at m=3, h=pi/4
        h = math.pi / 4
        x = h * np.arange(1, 4)
        F = np.sin(x)
        F[0] -= 1.0 / h**2
        F[-1] -= (math.pi + 1.0) / h**2
        A = laplacian_stencil(3)
        got = thomas_solve(A, h**2 * F)
        oracle = np.linalg.solve(A.to_dense(), h**2 * F)
        assert np.max(np.abs(got - oracle)) <= 1e-12

    def test_hand_elimination(self):
        # 2x1+x2=1; x1+2x2+x3=0; x2+2x3=1 eliminates to (1, -1, 1)
        A = BandedMatrix.tridiagonal(np.array([1.0, 1.0]), np.array([2.0, 2.0, 2.0]), np.array([1.0, 1.0]))
        b = np.array([1.0, 0.0, 1.0])
        got = thomas_solve(A, b)
        assert np.allclose(got, np.array([1.0, -1.0, 1.0]), atol=1e-14)
        assert np.allclose(np.linalg.solve(A.to_dense(), b), got, atol=1e-14)

    def test_zero_pivot_names_index(self):
        A = BandedMatrix.tridiagonal(np.array([0.0]), np.array([1.0, 0.0]), np.array([0.0]))
        with pytest.raises(SingularMatrixError, match="row 1"):
            thomas_solve(A, np.ones(2))

    def test_requires_tridiagonal(self):
        with pytest.raises(ValueError):
            thomas_solve(BandedMatrix.identity(3), np.ones(3))

    def test_residual_bound(self, np_rng):
        A = random_dominant_tridiagonal(np_rng, 40)
        b = np_rng.standard_normal(40)
        x = thomas_solve(A, b)
        assert np.max(np.abs(band_matvec(A, x) - b)) <= 1e-10 * (1.0 + np.max(np.abs(b)))

    @settings(max_examples=40, deadline=None)
    @given(n=st.integers(1, 20), seed=st.integers(0, 2**32 - 1))
    def test_matches_dense_oracle(self, n, seed):
        rng = np.random.default_rng(seed)
        A = random_dominant_tridiagonal(rng, n)
        b = rng.standard_normal(n)
        x = thomas_solve(A, b)
        oracle = np.linalg.solve(A.to_dense(), b)
        scale = max(1.0, float(np.max(np.abs(oracle))))
        assert np.max(np.abs(x - oracle)) <= 1e-10 * scale


class TestBandedCholesky:
    def test_diagonal_case(self):
        S = BandedMatrix.from_diagonal(np.array([4.0, 4.0]))
        L = banded_cholesky(S)
        assert np.allclose(L.to_dense(), 2.0 * np.eye(2))

    def test_gram_of_stencil_vs_dense_oracle(self):
        X = laplacian_stencil(5)
        S = normal_equations(X)
        L = banded_cholesky(S)
        oracle = np.linalg.cholesky(X.to_dense().T @ X.to_dense())
        assert np.max(np.abs(L.to_dense() - oracle)) <= 1e-12

    def test_not_positive_definite(self):
        # rank-deficient: ones everywhere has a zero eigenvalue
        S = BandedMatrix.from_dense(np.ones((3, 3)), 2, 2)
        with pytest.raises(NotPositiveDefiniteError, match="index"):
            banded_cholesky(S)

    def test_rejects_asymmetric(self):
        S = BandedMatrix.tridiagonal(np.array([1.0]), np.array([4.0, 4.0]), np.array([2.0]))
        with pytest.raises(ValueError, match="symmetric"):
            banded_cholesky(S)

    def test_reconstruction_relative_error(self, np_rng):
        X = random_dominant_tridiagonal(np_rng, 30)
        S = normal_equations(X)
        L = banded_cholesky(S)
        R = L.to_dense() @ L.to_dense().T
        rel = np.linalg.norm(R - S.to_dense()) / np.linalg.norm(S.to_dense())
        assert rel <= 1e-10


class TestNormalEquations:
    def test_identity(self):
        S = normal_equations(BandedMatrix.identity(4))
        assert np.allclose(S.to_dense(), np.eye(4))

    def test_stencil_m4_pentadiagonal(self):
        X = laplacian_stencil(4)
        S = normal_equations(X)
        assert S.kl == S.ku == 2
        assert np.max(np.abs(S.to_dense() - X.to_dense().T @ X.to_dense())) <= 1e-13

    def test_diagonal_squares(self):
        d = np.array([3.0, -2.0, 0.5])
        S = normal_equations(BandedMatrix.from_diagonal(d))
        assert np.array_equal(S.to_dense(), np.diag(d**2))

    @settings(max_examples=25, deadline=None)
    @given(n=st.integers(2, 15), seed=st.integers(0, 2**32 - 1))
    def test_bitwise_symmetric(self, n, seed):
        X = random_dominant_tridiagonal(np.random.default_rng(seed), n)
        S = normal_equations(X)
        D = S.to_dense()
        for i in range(n):
            for j in range(n):
                assert D[i, j] == D[j, i]  # bit-for-bit


class TestTriangularSolves:
    def test_identity(self):
        L = banded_cholesky(BandedMatrix.identity(3))
        b = np.array([1.0, 2.0, 3.0])
        assert np.array_equal(solve_lower_banded(L, b), b)
        assert np.array_equal(solve_upper_banded(L, b), b)

    def test_scalar_case(self):
        L = banded_cholesky(BandedMatrix.from_diagonal(np.array([4.0, 4.0])))
        assert np.allclose(solve_lower_banded(L, np.array([2.0, 2.0])), np.array([1.0, 1.0]))

    def test_pentadiagonal_vs_dense_oracle(self, np_rng):
        X = random_dominant_tridiagonal(np_rng, 12)
        L = banded_cholesky(normal_equations(X))
        Ld = L.to_dense()
        b = np_rng.standard_normal(12)
        from scipy.linalg import solve_triangular

        assert np.max(np.abs(solve_lower_banded(L, b) - solve_triangular(Ld, b, lower=True))) <= 1e-11
        assert np.max(np.abs(solve_upper_banded(L, b) - solve_triangular(Ld.T, b, lower=False))) <= 1e-11

    def test_matrix_rhs_matches_columnwise(self, np_rng):
        X = random_dominant_tridiagonal(np_rng, 9)
        L = banded_cholesky(normal_equations(X))
        B = np_rng.standard_normal((9, 4))
        got = solve_upper_banded(L, B)
        for k in range(4):
            assert np.array_equal(got[:, k], solve_upper_banded(L, B[:, k]))

    def test_dimension_mismatch(self):
        L = banded_cholesky(BandedMatrix.identity(3))
        with pytest.raises(ValueError):
            solve_lower_banded(L, np.ones(4))

    @settings(max_examples=20, deadline=None)
    @given(n=st.integers(2, 50), seed=st.integers(0, 2**32 - 1))
    def test_factor_solve_composes_to_spd_solve(self, n, seed):
        rng = np.random.default_rng(seed)
        X = random_dominant_tridiagonal(rng, n)
        S = normal_equations(X)
        L = banded_cholesky(S)
        b = rng.standard_normal(n)
        x = solve_upper_banded(L, solve_lower_banded(L, b))
        oracle = np.linalg.solve(S.to_dense(), b)
        assert np.max(np.abs(x - oracle)) <= 1e-9 * max(1.0, float(np.max(np.abs(oracle))))


class TestGramFactor:
    def test_matches_cholesky_of_normal_equations(self, np_rng):
        for n in (2, 3, 7, 25):
            X = random_dominant_tridiagonal(np_rng, n)
            L1 = gram_factor(X)
            L2 = banded_cholesky(normal_equations(X))
            assert np.allclose(L1.to_dense(), L2.to_dense(), rtol=1e-9, atol=1e-12)

    def test_diagonal_matrix(self):
        X = BandedMatrix.from_diagonal(np.array([-3.0, 2.0]))
        L = gram_factor(X)
        assert np.allclose(L.to_dense(), np.diag([3.0, 2.0]))

    def test_survives_extreme_row_scaling(self):
        # rows spanning ~18 orders of magnitude: the explicit Gram matrix is
        # not factorable in double precision, the QR route is
        d = np.array([1.0, 1e9, 1.0, 1e-9, 2.0, 1e9, 3.0])
        n = d.size
        X = BandedMatrix.tridiagonal(0.1 * d[1:], d, 0.05 * d[:-1])
        L = gram_factor(X)
        S = X.to_dense().T @ X.to_dense()
        rel = np.linalg.norm(L.to_dense() @ L.to_dense().T - S) / np.linalg.norm(S)
        assert rel <= 1e-12

    def test_singular_raises(self):
        X = BandedMatrix.from_diagonal(np.array([1.0, 0.0]))
        with pytest.raises(SingularMatrixError):
            gram_factor(X)


class TestBandedSolveDispatch:
    def test_diagonal_path(self):
        A = BandedMatrix.from_diagonal(np.array([2.0, 4.0]))
        assert np.allclose(banded_solve(A, np.array([2.0, 8.0])), np.array([1.0, 2.0]))

    def test_dense_fallback_guard(self, np_rng):
        X = random_dominant_tridiagonal(np_rng, 8)
        S = normal_equations(X)  # pentadiagonal -> dense path
        b = np_rng.standard_normal(8)
        assert np.allclose(banded_solve(S, b), np.linalg.solve(S.to_dense(), b))
        big = normal_equations(random_dominant_tridiagonal(np_rng, 80))
        with pytest.raises(ValueError, match="fallback"):
            dense_solve(big, np.zeros(80))
