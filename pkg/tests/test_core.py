import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from complex_omp.core import hermitian_inner, lstsq, min_eigen_hermitian, project_off
from complex_omp.errors import DimensionError, SingularMatrixError

from .helpers import crandn
from .oracles import explicit_projector_residual, hermitian3_eigenvalues, normal_equations_lstsq


class TestHermitianInner:
    def test_unit_self_product(self):
        assert hermitian_inner([1 + 0j, 0], [1 + 0j, 0]) == 1 + 0j

    def test_conjugation(self):
        assert hermitian_inner([1j], [1j]) == 1 + 0j

    def test_hand_expansion(self):
        # (1-1j)*3 + 2*(1j)
        assert hermitian_inner([1 + 1j, 2], [3, 1j]) == 3 - 1j

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            hermitian_inner([1, 2], [1])


class TestLstsq:
    def test_identity(self, backend):
        coeffs, res = lstsq(np.eye(3), [1, 2j, 3])
        np.testing.assert_allclose(coeffs, [1, 2j, 3], atol=1e-15)
        np.testing.assert_allclose(res, 0, atol=1e-15)

    def test_single_column(self, backend):
        coeffs, res = lstsq([[1], [1]], [2, 0])
        np.testing.assert_allclose(coeffs, [1], atol=1e-15)
        np.testing.assert_allclose(res, [1, -1], atol=1e-15)

    def test_matches_normal_equations(self, backend, rng):
        A = crandn(rng, 8, 3)
        y = crandn(rng, 8)
        coeffs, _ = lstsq(A, y)
        np.testing.assert_allclose(coeffs, normal_equations_lstsq(A, y), atol=1e-8)

    def test_rank_deficient_names_column(self, backend, rng):
        A = crandn(rng, 6, 3)
        A[:, 2] = 2j * A[:, 0]
        with pytest.raises(SingularMatrixError) as exc:
            lstsq(A, crandn(rng, 6))
        assert exc.value.column in (0, 2)

    def test_zero_matrix(self, backend):
        with pytest.raises(SingularMatrixError):
            lstsq(np.zeros((3, 2)), [1, 2, 3])

    def test_shape_errors(self):
        with pytest.raises(DimensionError):
            lstsq(np.eye(3), [1, 2])
        with pytest.raises(DimensionError):
            lstsq(np.ones((2, 3)), [1, 2])

    def test_ill_conditioned_residual_stays_orthogonal(self, backend):
        # nearly parallel unit columns, like neighbouring GTD atoms
        t = np.linspace(0, 1, 30)
        A = np.column_stack([np.exp(-2j * np.pi * 0.3 * t * s) for s in (1.0, 1.02, 1.04)])
        y = np.exp(1j * t)
        coeffs, res = lstsq(A, y)
        assert np.max(np.abs(A.conj().T @ res)) <= 1e-9 * np.linalg.norm(y)
        np.testing.assert_allclose(res, y - A @ coeffs, atol=1e-9)


class TestProjectOff:
    def test_coordinate_projection(self, backend):
        out = project_off([[1], [0], [0]], [5, 1, 2j])
        np.testing.assert_allclose(out, [0, 1, 2j], atol=1e-15)

    def test_full_span(self, backend, rng):
        out = project_off(crandn(rng, 4, 4), crandn(rng, 4))
        np.testing.assert_allclose(out, 0, atol=1e-12)

    def test_matches_explicit_projector(self, backend, rng):
        A = crandn(rng, 6, 2)
        y = crandn(rng, 6)
        np.testing.assert_allclose(project_off(A, y), explicit_projector_residual(A, y), atol=1e-8)


class TestMinEigen:
    def test_identity(self, backend):
        assert min_eigen_hermitian(np.eye(2)) == pytest.approx(1.0, abs=1e-15)

    def test_two_by_two(self, backend):
        assert min_eigen_hermitian([[1, 0.5], [0.5, 1]]) == pytest.approx(0.5, abs=1e-14)

    def test_complex_two_by_two(self, backend):
        # eigenvalues 1 +/- |0.5j|
        assert min_eigen_hermitian([[1, 0.5j], [-0.5j, 1]]) == pytest.approx(0.5, abs=1e-14)

    def test_cubic_oracle(self, backend, rng):
        for _ in range(20):
            X = crandn(rng, 5, 3)
            G = X.conj().T @ X
            expected = hermitian3_eigenvalues(G)[0]
            assert min_eigen_hermitian(G) == pytest.approx(expected, abs=1e-7)

    def test_one_by_one(self, backend):
        assert min_eigen_hermitian([[2.5]]) == 2.5

    def test_non_square(self):
        with pytest.raises(DimensionError):
            min_eigen_hermitian(np.ones((2, 3)))

    def test_size_64(self, backend, rng):
        X = crandn(rng, 80, 64)
        G = X.conj().T @ X
        ref = np.linalg.eigvalsh(G)
        assert min_eigen_hermitian(G) == pytest.approx(ref[0], abs=1e-8 * ref[-1])


shapes = st.tuples(st.integers(1, 9), st.integers(0, 2**32 - 1)).flatmap(
    lambda t: st.tuples(st.integers(t[0], 10), st.just(t[0]), st.just(t[1]))
)


@settings(max_examples=60, deadline=None)
@given(shapes)
def test_lstsq_residual_orthogonal(shape):
    m, n, seed = shape
    rng = np.random.default_rng(seed)
    A, y = crandn(rng, m, n), crandn(rng, m)
    coeffs, res = lstsq(A, y)
    assert np.max(np.abs(A.conj().T @ (y - A @ coeffs))) <= 1e-9 * np.linalg.norm(y)
    assert np.max(np.abs(A.conj().T @ res)) <= 1e-9 * np.linalg.norm(y)


@settings(max_examples=60, deadline=None)
@given(shapes)
def test_projection_idempotent_and_contracting(shape):
    m, n, seed = shape
    rng = np.random.default_rng(seed)
    A, y = crandn(rng, m, n), crandn(rng, m)
    once = project_off(A, y)
    np.testing.assert_allclose(project_off(A, once), once, atol=1e-9)
    assert np.linalg.norm(once) <= np.linalg.norm(y) * (1 + 1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_min_eigen_below_rayleigh_quotient(n, seed):
    rng = np.random.default_rng(seed)
    X = crandn(rng, n + 2, n)
    G = X.conj().T @ X
    lam = min_eigen_hermitian(G)
    for _ in range(5):
        v = crandn(rng, n)
        rq = (v.conj() @ G @ v).real / (v.conj() @ v).real
        assert lam <= rq + 1e-9 * np.linalg.norm(G)
