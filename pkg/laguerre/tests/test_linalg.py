import numpy as np
from django.test import SimpleTestCase, override_settings
from numpy.testing import assert_allclose

from laguerre.exceptions import InvalidInput, SingularMatrix
from laguerre.linalg import (
    BlockMatrix,
    adj,
    as_cmatrix,
    comm,
    eye,
    fro,
    hermitian_defect,
    hermitian_sqrt,
    inv,
    mat_power_log,
    relative,
    rsolve,
    skew_defect,
    solve,
)


class CMatrixTests(SimpleTestCase):
    def test_scalar_becomes_one_by_one(self):
        M = as_cmatrix(2.5)
        self.assertEqual(M.shape, (1, 1))
        self.assertEqual(M.dtype, complex)

    def test_rejects_non_square_and_wrong_size(self):
        with self.assertRaises(InvalidInput):
            as_cmatrix([[1, 2, 3], [4, 5, 6]])
        with self.assertRaises(InvalidInput):
            as_cmatrix([[1, 0], [0, 1]], N=3)
        with self.assertRaises(InvalidInput):
            as_cmatrix([[np.nan]])

    def test_skew_defect_of_skew_hermitian_is_zero(self):
        M = np.array([[1j, 2 + 1j], [-2 + 1j, -3j]])
        self.assertEqual(skew_defect(M), 0.0)

    def test_relative_scale(self):
        self.assertEqual(relative(1.0, 0.0), 1.0)
        self.assertEqual(relative(2.0, 3.0), 0.5)

    def test_hermitian_defect_is_frobenius(self):
        self.assertEqual(hermitian_defect(eye(2)), 0.0)
        # M - M* = 2M untuk matriks anti-Hermitian
        M = np.array([[0, 1j], [1j, 0]])
        self.assertAlmostEqual(hermitian_defect(M), 2 * np.sqrt(2), places=14)
        rng = np.random.default_rng(11)
        A = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        H = 0.5 * (A + adj(A))
        self.assertLessEqual(hermitian_defect(H), 1e-14 * (1 + fro(H)))


class SolveTests(SimpleTestCase):
    def test_left_and_right_solves(self):
        M = np.array([[2.0, 1.0], [0.5, 3.0]], dtype=complex)
        rhs = np.array([[1.0, 2j], [3.0, -1.0]])
        assert_allclose(M @ solve(M, rhs), rhs, atol=1e-14)
        assert_allclose(rsolve(rhs, M) @ M, rhs, atol=1e-14)
        assert_allclose(inv(M) @ M, eye(2), atol=1e-14)

    def test_singular_matrix_is_reported(self):
        with self.assertRaises(SingularMatrix) as ctx:
            solve(np.array([[1.0, 2.0], [2.0, 4.0]]), eye(2), what='uji')
        self.assertIn('uji', str(ctx.exception))

    def test_diagonal_inverse(self):
        assert_allclose(solve(np.diag([2.0, 4.0]), eye(2)), np.diag([0.5, 0.25]))

    def test_round_trip_up_to_condition_1e6(self):
        rng = np.random.default_rng(3)
        for N in (2, 3, 4):
            U, _ = np.linalg.qr(rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N)))
            V, _ = np.linalg.qr(rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N)))
            M = U @ np.diag(np.geomspace(1.0, 1e-6, N)) @ adj(V)
            rhs = rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))
            X = solve(M, rhs)
            backward = fro(M @ X - rhs) / (fro(M) * fro(X))
            self.assertLessEqual(backward, 1e-12)
            Y = rsolve(rhs, M)
            self.assertLessEqual(fro(Y @ M - rhs) / (fro(M) * fro(Y)), 1e-12)

    def test_near_singular_is_reported(self):
        M = np.array([[1.0, 1.0], [1.0, 1.0 + 1e-14]])
        with self.assertRaises(SingularMatrix):
            solve(M, eye(2))

    @override_settings(MVOP_COND_LIMIT=10.0)
    def test_condition_limit_comes_from_settings(self):
        with self.assertRaises(SingularMatrix):
            inv(np.diag([1.0, 1e-3]))

    def test_hermitian_sqrt(self):
        M = np.array([[4.0, 1j], [-1j, 2.0]])
        S = hermitian_sqrt(M)
        assert_allclose(S @ S, M, atol=1e-13)
        assert_allclose(S, adj(S), atol=1e-14)
        with self.assertRaises(SingularMatrix):
            hermitian_sqrt(np.diag([1.0, -1.0]))


class PowerTests(SimpleTestCase):
    def test_power_of_diagonal(self):
        B = np.diag([2.0, 0.5])
        assert_allclose(mat_power_log(B, 4.0), np.diag([16.0, 2.0]), rtol=1e-13)
        assert_allclose(mat_power_log(B, 1.0), eye(2))

    def test_group_law_on_random_matrices(self):
        rng = np.random.default_rng(5)
        for N in (2, 3):
            for _ in range(4):
                B = rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))
                B *= rng.uniform(0.2, 2.0) / np.linalg.norm(B, 2)
                x, y = rng.uniform(0.1, 10.0, size=2)
                product = mat_power_log(B, x) @ mat_power_log(B, y)
                expected = mat_power_log(B, x * y)
                self.assertLessEqual(fro(product - expected) / (1 + fro(expected)), 1e-10)
                assert_allclose(mat_power_log(B, 1.0), eye(N), atol=1e-14)

    def test_power_needs_positive_x(self):
        with self.assertRaises(InvalidInput):
            mat_power_log(eye(2), 0.0)


class BlockMatrixTests(SimpleTestCase):
    def test_sigma3_squares_to_identity(self):
        S3 = BlockMatrix.sigma3(2)
        assert_allclose((S3 @ S3).full(), np.eye(4))
        self.assertEqual(S3.trace(), 0)

    def test_blocks_must_agree(self):
        with self.assertRaises(InvalidInput):
            BlockMatrix(eye(2), eye(2), eye(2), eye(3))

    def test_product_matches_dense(self):
        rng = np.random.default_rng(7)
        A = BlockMatrix.from_full(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
        C = BlockMatrix.from_full(rng.normal(size=(4, 4)))
        assert_allclose((A @ C).full(), A.full() @ C.full(), atol=1e-13)
        assert_allclose((A - A).full(), np.zeros((4, 4)))
        self.assertEqual(A.N, 2)

    def test_commutator(self):
        A = np.array([[0, 1], [0, 0]], dtype=complex)
        B = np.diag([1.0, 0.0]).astype(complex)
        assert_allclose(comm(B, A), A)
