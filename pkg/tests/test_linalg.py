"""Tests for the tolerance settings and the dense kernels."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from dh_pencil.core.errors import (
    ColumnsNotOrthonormal,
    ConfigurationError,
    InvalidInput,
    InvalidTolerance,
    NotHermitian,
)
from dh_pencil.linalg.kernels import (
    adjoint,
    as_matrix,
    block_diag,
    cs_decomposition,
    hermitian_eig,
    householder_qr,
    is_hermitian,
    is_psd,
    kernel_basis,
    maybe_real,
    numerical_rank,
    ordered_schur_zero_trailing,
    pseudoinverse,
    psd_pinv_sqrt,
    psd_sqrt,
    range_basis,
    range_projector,
    svd,
    zero_deflation,
)
from dh_pencil.linalg.tolerance import TOLERANCE_ENV_VAR, Tolerance


def planted_zero_matrix(rng: np.random.Generator, chains: list[int], others: list[float]) -> np.ndarray:
    """Similarity transform of a Jordan matrix with zero chains and simple nonzero eigenvalues."""
    blocks = [np.eye(size, k=1) for size in chains] + [np.array([[v]]) for v in others]
    jordan = block_diag(*blocks)
    n = jordan.shape[0]
    s = rng.standard_normal((n, n)) + 3 * np.eye(n)
    return s @ jordan @ np.linalg.inv(s)


class TestTolerance:
    """Test the tolerance dataclass."""

    def test_defaults(self):
        tol = Tolerance()
        assert tol.relative == 1e-10
        assert tol.absolute == 1e-13
        assert tol.cluster == 1e-7
        assert tol.axis == 1e-8
        assert tol.zero == 1e-8

    def test_threshold_scales_with_dimension_and_norm(self):
        tol = Tolerance()
        assert tol.threshold(2.0, 3) == pytest.approx(3 * 1e-10 * 2.0 + 1e-13)
        assert tol.threshold(2.0, 0) == tol.threshold(2.0, 1)

    @pytest.mark.parametrize("field", ["relative", "absolute", "cluster", "axis", "zero"])
    def test_rejects_negative(self, field):
        with pytest.raises(InvalidTolerance):
            Tolerance(**{field: -1.0})

    def test_rejects_non_finite(self):
        with pytest.raises(InvalidTolerance):
            Tolerance(relative=float("nan"))
        with pytest.raises(InvalidInput):
            Tolerance(cluster=float("inf"))

    def test_dict_round_trip(self):
        tol = Tolerance(relative=1e-9, zero=1e-6)
        assert Tolerance.from_dict(tol.to_dict()) == tol
        assert Tolerance.from_dict({"relative": 1e-8, "unknown": 3}).relative == 1e-8

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv(TOLERANCE_ENV_VAR, "1e-8")
        tol = Tolerance.from_env(Tolerance(zero=1e-6))
        assert tol.relative == 1e-8
        assert tol.zero == 1e-6

    def test_env_unset_keeps_base(self, monkeypatch):
        monkeypatch.delenv(TOLERANCE_ENV_VAR, raising=False)
        base = Tolerance(relative=1e-7)
        assert Tolerance.from_env(base) == base

    @pytest.mark.parametrize("raw", ["abc", "-1e-8", "nan"])
    def test_env_malformed(self, monkeypatch, raw):
        monkeypatch.setenv(TOLERANCE_ENV_VAR, raw)
        with pytest.raises(ConfigurationError):
            Tolerance.from_env()


class TestBasics:
    """Test conversions and elementary helpers."""

    def test_as_matrix_rejects_vectors_and_nan(self):
        with pytest.raises(InvalidInput):
            as_matrix([1.0, 2.0])
        with pytest.raises(InvalidInput):
            as_matrix([[1.0, np.nan]])

    def test_as_matrix_keeps_complex(self):
        a = as_matrix([[1 + 1j, 0]])
        assert a.dtype == np.complex128
        assert as_matrix([[1, 2]]).dtype == np.float64

    def test_adjoint_conjugates(self):
        a = np.array([[1 + 2j, 3]])
        assert_allclose(adjoint(a), np.array([[1 - 2j], [3]]))

    def test_maybe_real(self):
        a = np.array([[1 + 1e-18j]])
        assert not np.iscomplexobj(maybe_real(a, 1e-12))
        assert np.iscomplexobj(maybe_real(np.array([[1 + 1e-3j]]), 1e-12))

    def test_householder_qr(self, rng):
        a = rng.standard_normal((5, 3))
        q, r = householder_qr(a)
        assert_allclose(q @ r, a, atol=1e-12)
        assert_allclose(adjoint(q) @ q, np.eye(5), atol=1e-12)
        assert_allclose(np.tril(r, -1), 0, atol=1e-14)

    def test_svd_returns_v(self, rng):
        a = rng.standard_normal((4, 6))
        u, s, v = svd(a)
        sigma = np.zeros((4, 6))
        sigma[:4, :4] = np.diag(s)
        assert_allclose(u @ sigma @ adjoint(v), a, atol=1e-12)

    def test_block_diag_with_empty_blocks(self):
        out = block_diag(np.eye(2), np.zeros((0, 3)), np.ones((1, 1)))
        assert out.shape == (3, 6)
        assert out[2, 5] == 1.0


class TestRankDecisions:
    """Test rank-revealing helpers."""

    def test_numerical_rank(self, tol):
        assert numerical_rank(np.diag([1.0, 1e-14]), tol) == 1
        assert numerical_rank(np.diag([1.0, 1e-6]), tol) == 2
        assert numerical_rank(np.zeros((3, 2)), tol) == 0
        assert numerical_rank(np.zeros((0, 4)), tol) == 0

    def test_kernel_and_range(self, rng, tol):
        a = rng.standard_normal((5, 2)) @ rng.standard_normal((2, 4))
        kernel = kernel_basis(a, tol)
        rng_basis = range_basis(a, tol)
        assert kernel.shape == (4, 2)
        assert rng_basis.shape == (5, 2)
        assert_allclose(a @ kernel, 0, atol=1e-12)
        projector = range_projector(a, tol)
        assert_allclose(projector @ a, a, atol=1e-12)
        assert_allclose(projector @ projector, projector, atol=1e-12)

    def test_pseudoinverse_matches_numpy(self, rng, tol):
        a = rng.standard_normal((4, 2)) @ rng.standard_normal((2, 3))
        assert_allclose(pseudoinverse(a, tol), np.linalg.pinv(a), atol=1e-10)
        assert pseudoinverse(np.zeros((0, 3)), tol).shape == (3, 0)


class TestHermitianPredicates:
    """Test Hermitian and semidefinite predicates."""

    def test_is_hermitian(self, tol):
        assert is_hermitian(np.array([[1.0, 2.0], [2.0, 3.0]]), tol)
        assert not is_hermitian(np.array([[1.0, 2.0], [0.0, 3.0]]), tol)
        assert not is_hermitian(np.ones((2, 3)), tol)

    def test_hermitian_eig_rejects_nonsymmetric(self, tol):
        with pytest.raises(NotHermitian):
            hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]), tol)

    def test_is_psd(self, tol):
        assert is_psd(np.diag([1.0, 0.0]), tol)
        assert not is_psd(np.array([[1.0, 2.0], [2.0, 1.0]]), tol)
        assert is_psd(np.diag([1.0, -1e-16]), tol)

    def test_psd_square_roots(self, tol):
        a = np.diag([4.0, 0.0])
        assert_allclose(psd_sqrt(a, tol), np.diag([2.0, 0.0]), atol=1e-14)
        assert_allclose(psd_pinv_sqrt(a, tol), np.diag([0.5, 0.0]), atol=1e-14)

    def test_psd_sqrt_squares_back(self, rng, tol):
        g = rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
        a = g @ adjoint(g)
        root = psd_sqrt(a, tol)
        assert_allclose(root @ root, a, atol=1e-10)
        assert is_hermitian(root, tol)


class TestCsDecomposition:
    """Test the CS decomposition of orthonormal stacks."""

    @pytest.mark.parametrize("complex_field", [False, True])
    def test_factors(self, rng, tol, complex_field):
        n = 4
        g = rng.standard_normal((2 * n, n))
        if complex_field:
            g = g + 1j * rng.standard_normal((2 * n, n))
        z, _ = np.linalg.qr(g)
        u1, u2, v, c, s = cs_decomposition(z[:n], z[n:], tol)
        assert_allclose(u1 @ z[:n] @ v, np.diag(c), atol=1e-10)
        assert_allclose(u2 @ z[n:] @ v, np.diag(s), atol=1e-10)
        assert_allclose(c**2 + s**2, 1.0, atol=1e-10)
        assert np.all(c >= 0) and np.all(s >= -1e-14)

    def test_rejects_non_orthonormal(self, tol):
        with pytest.raises(ColumnsNotOrthonormal):
            cs_decomposition(np.eye(2), np.eye(2), tol)

    def test_empty(self, tol):
        _, _, _, c, s = cs_decomposition(np.zeros((0, 0)), np.zeros((0, 0)), tol)
        assert c.size == 0 and s.size == 0


class TestZeroDeflation:
    """Test the deflation of the zero eigenvalue."""

    def test_chain_sizes(self, rng, tol):
        m = planted_zero_matrix(rng, [2, 1], [1.0, -2.0])
        v, t, sizes = zero_deflation(m, tol)
        assert sizes == [2, 1]
        assert_allclose(adjoint(v) @ v, np.eye(5), atol=1e-12)
        assert_allclose(np.abs(np.diag(t))[:3], 0, atol=1e-12)

    def test_ordered_schur_puts_zeros_last(self, rng, tol):
        m = planted_zero_matrix(rng, [1, 1], [3.0, -1.0, 0.5])
        w, lower, n_zero = ordered_schur_zero_trailing(m, tol)
        assert n_zero == 2
        assert_allclose(adjoint(w) @ m @ w, lower, atol=1e-9)
        assert_allclose(np.triu(lower, 1), 0, atol=1e-12)
        assert np.all(np.diag(lower)[-2:] == 0)
        assert_allclose(lower[-2:, -2:], 0, atol=1e-9)
        assert sorted(np.real(np.diag(lower)[:3])) == pytest.approx([-1.0, 0.5, 3.0])

    def test_ordered_schur_without_zero(self, tol):
        w, lower, n_zero = ordered_schur_zero_trailing(np.diag([1.0, 2.0]), tol)
        assert n_zero == 0
        assert_allclose(adjoint(w) @ np.diag([1.0, 2.0]) @ w, lower, atol=1e-12)
