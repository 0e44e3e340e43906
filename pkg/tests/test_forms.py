"""Tests for diagonal and condensed forms of (E, Q) and the structured generators."""

import math

import numpy as np
import pytest
import scipy.linalg as sla

from dh_pencil.core.errors import (
    BothNonnegInfeasible,
    InfeasibleDimensions,
    InvalidInput,
    SingularPencil,
    StructureViolated,
)
from dh_pencil.forms import (
    HankelSpec,
    condensed_form_EQ,
    diagonalize_commuting_pair,
    diagonalize_regular_pair,
    generate_prescribed_left_indices,
    hankel_from_nodes,
    left_index_block,
    random_index_one_pencil,
    random_structured_pencil,
    trailing_window,
)
from dh_pencil.kronecker import staircase
from dh_pencil.linalg.kernels import is_hermitian, is_psd
from dh_pencil.pencils import check_structure, fixture


def rect_diag(values, shape):
    out = np.zeros(shape)
    out[np.arange(len(values)), np.arange(len(values))] = values
    return out


class TestDiagonalizeRegularPair:
    @pytest.mark.parametrize("seed", range(5))
    @pytest.mark.parametrize("complex_field", [False, True])
    def test_round_trip(self, seed, complex_field, tol):
        pencil = random_structured_pencil(5, 5, seed, regular=True, complex_field=complex_field)
        form = diagonalize_regular_pair(pencil.E, pencil.Q, tol)
        res_e, res_q = form.residuals(pencil.E, pencil.Q)
        scale = np.linalg.norm(pencil.E, 2) + np.linalg.norm(pencil.Q, 2)
        assert res_e < 1e-9 * scale
        assert res_q < 1e-9 * scale
        np.testing.assert_allclose(form.d_e**2 + form.d_q**2, np.ones(5), atol=1e-10)
        assert np.all(form.d_e >= 0)
        np.testing.assert_allclose(form.U @ form.U.conj().T, np.eye(5), atol=1e-10)

    def test_both_nonnegative(self, tol):
        pencil = random_structured_pencil(4, 4, 11, regular=True)
        form = diagonalize_regular_pair(pencil.E, pencil.Q, tol, nonneg="both")
        assert np.all(form.d_e >= -1e-12)
        assert np.all(form.d_q >= -1e-12)

    def test_nonnegative_q(self, tol):
        form = diagonalize_regular_pair(np.eye(2), np.diag([1.0, -1.0]), tol, nonneg="Q")
        assert np.all(form.d_q >= 0)
        assert sorted(np.round(form.d_e * math.sqrt(2), 10)) == [-1.0, 1.0]

    def test_both_nonnegative_needs_psd_product(self, tol):
        with pytest.raises(BothNonnegInfeasible):
            diagonalize_regular_pair(np.eye(2), np.diag([1.0, -1.0]), tol, nonneg="both")

    def test_singular(self, tol):
        d = np.diag([1.0, 0.0])
        with pytest.raises(SingularPencil):
            diagonalize_regular_pair(d, d, tol)

    def test_not_hermitian(self, tol):
        with pytest.raises(StructureViolated):
            diagonalize_regular_pair(np.eye(2), np.array([[0.0, 1.0], [0.0, 0.0]]), tol)

    def test_index_two_pair(self, tol):
        pencil = fixture("index-two")
        form = diagonalize_regular_pair(pencil.E, pencil.Q, tol)
        assert sorted(np.round(form.d_e, 10)) == [0.0, pytest.approx(1 / math.sqrt(2))]


class TestDiagonalizeCommutingPair:
    def test_rectangular(self, rng, tol):
        u = sla.qr(rng.standard_normal((4, 4)))[0]
        v = sla.qr(rng.standard_normal((3, 3)))[0]
        e = u @ rect_diag([2.0, 1.0, 0.0], (4, 3)) @ v.T
        q = u @ rect_diag([0.5, -1.0, 3.0], (4, 3)) @ v.T
        form = diagonalize_commuting_pair(e, q, tol)
        res_e, res_q = form.residuals(e, q)
        assert res_e < 1e-9
        assert res_q < 1e-9
        np.testing.assert_allclose(form.X.conj().T @ form.X, np.eye(3), atol=1e-10)
        np.testing.assert_allclose(form.U @ form.U.conj().T, np.eye(4), atol=1e-10)
        assert sorted(np.round(form.d_e, 8)) == [0.0, 1.0, 2.0]
        assert np.all(form.d_e >= 0)

    def test_requires_both_conditions(self, tol):
        e = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
        q = np.array([[0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
        with pytest.raises(StructureViolated):
            diagonalize_commuting_pair(e, q, tol)


class TestCondensedForm:
    def test_left_singular_only(self, tol):
        pencil = fixture("ex:sp")
        form = condensed_form_EQ(pencil.E, pencil.Q, tol)
        assert form.partition == (0, 3, 2, 0)
        res_e, res_q = form.round_trip_residuals(pencil.E, pencil.Q)
        assert max(res_e, res_q) < 1e-9
        e22, q22 = form.E22, form.Q22
        assert staircase(e22, q22, tol).structure.left_minimal_indices == (2,)

    def test_regular_and_zero_columns(self, tol):
        pencil = fixture("rem:ind", n=3)
        form = condensed_form_EQ(pencil.E, pencil.Q, tol)
        assert form.partition == (2, 1, 0, 1)
        np.testing.assert_allclose(np.diag(form.E11) ** 2 + np.diag(form.Q11) ** 2, [1.0, 1.0], atol=1e-12)
        np.testing.assert_allclose(np.diag(form.E11), np.diag(form.Q11), atol=1e-10)

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_prescribed_left_indices(self, seed, tol):
        e, q = generate_prescribed_left_indices(6, 5, [1, 2], seed=seed)
        form = condensed_form_EQ(e, q, tol)
        assert form.partition == (1, 5, 3, 1)
        res_e, res_q = form.round_trip_residuals(e, q)
        scale = np.linalg.norm(e, 2) + np.linalg.norm(q, 2)
        assert max(res_e, res_q) < 1e-8 * scale
        decoupled = staircase(*form.decoupled(), tol).structure
        original = staircase(e, q, tol).structure
        assert decoupled.left_minimal_indices == original.left_minimal_indices == (2, 1)
        assert decoupled.right_minimal_indices == original.right_minimal_indices == (0,)
        assert max(form.kernel_inclusions(tol)) < 1e-8 * scale

    def test_to_dict(self, tol):
        pencil = fixture("nonsimple0")
        data = condensed_form_EQ(pencil.E, pencil.Q, tol).to_dict()
        assert (data["n1"], data["m2"], data["n2"], data["zero_cols"]) == (2, 0, 0, 0)
        assert len(data["E11"]) == len(data["Q11"]) == 2

    def test_not_hermitian(self, tol):
        pencil = fixture("exdefl")
        with pytest.raises(StructureViolated):
            condensed_form_EQ(pencil.E, pencil.Q, tol)


class TestHankel:
    def test_values_and_factor(self):
        h, s = hankel_from_nodes(HankelSpec.integer_nodes(3))
        assert h[0, 0] == pytest.approx(14.0)
        assert h[0, 2] == pytest.approx(h[1, 1])
        np.testing.assert_allclose(s.T @ s, h, rtol=1e-10)

    def test_cholesky_factor(self):
        h, s = hankel_from_nodes(HankelSpec((3.0, 1.5, 0.5)), factor="cholesky")
        np.testing.assert_allclose(s, np.triu(s))
        np.testing.assert_allclose(s.T @ s, h, rtol=1e-10)

    def test_trailing_window(self):
        h, _ = hankel_from_nodes(HankelSpec.integer_nodes(4))
        window = trailing_window(h)
        assert window.shape == (3, 3)
        np.testing.assert_allclose(window, window.T)
        assert np.all(np.linalg.eigvalsh(window) > 0)

    @pytest.mark.parametrize("nodes", [(1.0, 2.0), (2.0, 0.0), (2.0, 2.0), (float("nan"),)])
    def test_invalid_nodes(self, nodes):
        with pytest.raises(InvalidInput):
            HankelSpec(nodes)

    def test_left_index_block(self, tol):
        e0, q0 = left_index_block(3)
        assert e0.shape == q0.shape == (3, 2)
        assert staircase(e0, q0, tol).structure.left_minimal_indices == (2,)


class TestPrescribedLeftIndices:
    @pytest.mark.parametrize(
        ("n", "m", "etas"),
        [(4, 3, [2]), (5, 4, [1, 0]), (6, 5, [1, 2]), (3, 3, []), (4, 2, [0, 0])],
    )
    def test_structure(self, n, m, etas, tol):
        e, q = generate_prescribed_left_indices(n, m, etas, seed=5)
        product = e.conj().T @ q
        assert is_hermitian(product, tol)
        assert is_psd(product, tol)
        structure = staircase(e, q, tol).structure
        assert structure.left_minimal_indices == tuple(sorted(etas, reverse=True))
        assert all(i == 0 for i in structure.right_minimal_indices)

    @pytest.mark.parametrize(("n", "m", "etas"), [(3, 1, []), (3, 3, [3]), (4, 4, [-1])])
    def test_infeasible(self, n, m, etas):
        with pytest.raises(InfeasibleDimensions):
            generate_prescribed_left_indices(n, m, etas)


def feasible_left_indices(n, m, rng):
    count = min(max(n - m, 0) + int(rng.integers(0, 2)), n)
    budget = n - count
    etas = []
    for _ in range(count):
        eta = int(rng.integers(0, min(budget, 2) + 1))
        etas.append(eta)
        budget -= eta
    return etas


class TestRightMinimalIndices:
    def test_hermitian_product_forces_zero_right_indices(self, tol):
        rng = np.random.default_rng(35)
        failures = []
        for trial in range(200):
            n, m = (int(v) for v in rng.integers(1, 8, size=2))
            if trial % 2:
                etas = feasible_left_indices(n, m, rng)
                e, q = generate_prescribed_left_indices(n, m, etas, seed=trial)
            else:
                pencil = random_structured_pencil(n, m, trial, complex_field=trial % 4 == 0)
                e, q = pencil.E, pencil.Q
            assert is_hermitian(e.conj().T @ q, tol)
            right = staircase(e, q, tol).structure.right_minimal_indices
            if any(i != 0 for i in right):
                failures.append((trial, n, m, right))
        assert failures == []


class TestRandomGenerators:
    @pytest.mark.parametrize("seed", range(4))
    def test_random_structured(self, seed, tol):
        pencil = random_structured_pencil(5, 4, seed)
        assert check_structure(pencil, tol).dh_hypotheses

    @pytest.mark.parametrize("complex_field", [False, True])
    def test_zero_left_indices(self, complex_field, tol):
        pencil = random_structured_pencil(5, 4, 9, zero_left_indices=True, complex_field=complex_field)
        assert pencil.field == ("complex" if complex_field else "real")
        structure = staircase(pencil.E, pencil.Q, tol).structure
        assert all(i == 0 for i in structure.left_minimal_indices)
        assert all(i == 0 for i in structure.right_minimal_indices)

    def test_regular(self, tol):
        pencil = random_structured_pencil(4, 4, 2, regular=True)
        assert staircase(pencil.E, pencil.Q, tol).structure.is_regular

    def test_without_l(self):
        pencil = random_structured_pencil(3, 3, 0, with_L=False)
        np.testing.assert_array_equal(pencil.L, -np.eye(3))

    def test_regular_must_be_square(self):
        with pytest.raises(InfeasibleDimensions):
            random_structured_pencil(3, 4, 0, regular=True)

    @pytest.mark.parametrize("complex_field", [False, True])
    def test_undamped_block(self, complex_field, tol):
        pencil = random_structured_pencil(6, 6, 3, regular=True, complex_field=complex_field, undamped=2)
        assert check_structure(pencil, tol).dh_hypotheses
        assert np.linalg.matrix_rank(pencil.R, tol=1e-9) <= 4

    @pytest.mark.parametrize(("m", "regular", "undamped"), [(5, True, 4), (4, False, 2), (5, True, -1)])
    def test_undamped_infeasible(self, m, regular, undamped):
        with pytest.raises(InfeasibleDimensions):
            random_structured_pencil(5, m, 0, regular=regular, undamped=undamped)

    @pytest.mark.parametrize("seed", range(3))
    def test_index_one_with_defective_zero(self, seed, tol):
        pencil = random_index_one_pencil(2, 3, 2, seed)
        assert pencil.metadata == {"blocks": [2, 3, 2], "semisimple_zero": False}
        assert check_structure(pencil, tol).dh_hypotheses
        structure = staircase(pencil.E, pencil.A, tol).structure
        assert structure.is_regular
        assert structure.zero_jordan_sizes == (2, 1, 1)
        assert structure.infinite_jordan_sizes == (1, 1)

    def test_index_one_with_semisimple_zero(self, tol):
        pencil = random_index_one_pencil(2, 2, 1, 4, semisimple_zero=True, complex_field=True)
        structure = staircase(pencil.E, pencil.A, tol).structure
        assert structure.zero_jordan_sizes == (1, 1, 1)
        assert structure.index == 1

    def test_index_one_infeasible(self):
        with pytest.raises(InfeasibleDimensions):
            random_index_one_pencil(0, 1, 1, 0)
        with pytest.raises(InfeasibleDimensions):
            random_index_one_pencil(1, 0, 1, 0)
