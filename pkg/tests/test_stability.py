"""Tests for the spectral guarantees, damped quadratics and Lyapunov criteria."""

import dataclasses

import numpy as np
import pytest

from dh_pencil.core.errors import NotPsd, ShapeMismatch
from dh_pencil.forms import random_structured_pencil
from dh_pencil.pencils import StructuredPencil, fixture
from dh_pencil.stability import (
    GuaranteeStatus,
    analyze_dh_pencil,
    analyze_quadratic,
    lyapunov_check,
)

SKEW = np.array([[0.0, -1.0], [1.0, 0.0]])


def random_psd(rng, n, rank):
    b = rng.standard_normal((n, rank))
    return b @ b.T


class TestWorkedExamples:
    def test_right_half_plane_eigenvalue_is_not_a_counterexample(self, tol):
        report = analyze_dh_pencil(fixture("ex:rhp", a=2.0), tol)
        assert report.hypothesis_report.dh_hypotheses
        assert report.eq_structure.left_minimal_indices == (1,)
        assert not report.hypotheses_hold
        assert not report.lhp_ok
        assert report.guarantees["lhp"] is GuaranteeStatus.NOT_GUARANTEED
        assert not report.counterexample

    def test_nonsemisimple_zero(self, tol):
        report = analyze_dh_pencil(fixture("nonsimple0"), tol)
        assert report.hypotheses_hold
        assert report.lhp_ok
        assert report.zero_jordan_sizes == (2,)
        assert report.imaginary == ()
        assert all(status is GuaranteeStatus.HOLDS for status in report.guarantees.values())

    def test_index_two(self, tol):
        report = analyze_dh_pencil(fixture("index-two"), tol)
        assert report.index_ok
        assert report.eigen_data.index == 2
        assert report.guarantees["index"] is GuaranteeStatus.HOLDS

    def test_right_index_one(self, tol):
        report = analyze_dh_pencil(fixture("right-index-one"), tol)
        assert report.hypotheses_hold
        assert report.left_indices_applicable
        assert report.right_indices_ok
        assert report.left_indices_ok

    @pytest.mark.parametrize("n", [3, 4])
    def test_left_indices_need_regular_eq(self, n, tol):
        report = analyze_dh_pencil(fixture("rem:ind", n=n), tol)
        assert report.hypotheses_hold
        assert not report.left_indices_applicable
        assert not report.left_indices_ok
        assert report.guarantees["left_indices"] is GuaranteeStatus.NOT_APPLICABLE
        assert not report.counterexample

    def test_symmetric_product_indefinite(self, tol):
        report = analyze_dh_pencil(fixture("ex:sp"), tol)
        assert not report.hypotheses_hold
        assert report.hamiltonian_min < 0


class TestImaginaryAxis:
    def test_undamped_oscillator(self, tol):
        pencil = StructuredPencil(E=np.eye(2), Q=np.eye(2), L=SKEW)
        report = analyze_dh_pencil(pencil, tol)
        values = sorted(check.eigenvalue.imag for check in report.imaginary)
        assert values == [pytest.approx(-1.0), pytest.approx(1.0)]
        assert report.imaginary_semisimple_ok
        assert report.rqv_ok
        assert report.guarantees["rqv"] is GuaranteeStatus.HOLDS

    def test_damping_away_from_the_oscillation(self, tol):
        ell = np.zeros((3, 3))
        ell[:2, :2] = SKEW
        ell[2, 2] = -1.0
        report = analyze_dh_pencil(StructuredPencil(E=np.eye(3), Q=np.eye(3), L=ell), tol)
        assert len(report.imaginary) == 2
        assert report.rqv_ok
        assert report.dissipation_min == pytest.approx(0.0, abs=1e-12)

    def test_to_dict(self, tol):
        data = analyze_dh_pencil(StructuredPencil(E=np.eye(2), Q=np.eye(2), L=SKEW), tol).to_dict()
        assert data["lhp_ok"] is True
        assert len(data["imaginary_eigenvalues"]) == 2
        assert data["guarantees"]["lhp"] == "holds"
        assert data["counterexample"] is False


class TestRandomizedGuarantees:
    def test_guarantees_hold_on_random_pencils(self, tol):
        rng = np.random.default_rng(42)
        failures = []
        for seed in range(200):
            n, m = (int(x) for x in rng.integers(2, 13, size=2))
            complex_field = bool(seed % 2)
            pencil = random_structured_pencil(n, m, seed, zero_left_indices=True, complex_field=complex_field)
            report = analyze_dh_pencil(pencil, tol)
            if not report.hypotheses_hold or report.counterexample:
                failures.append((seed, n, m, complex_field, report.to_dict()["guarantees"]))
        assert failures == []

    def test_undamped_modes_reach_the_imaginary_axis(self, tol):
        rng = np.random.default_rng(47)
        failures = []
        for seed in range(40):
            n = int(rng.integers(4, 10))
            undamped = int(rng.integers(2, min(n - 2, 3) + 1))
            complex_field = bool(seed % 2)
            pencil = random_structured_pencil(
                n, n, seed, regular=True, complex_field=complex_field, undamped=undamped
            )
            report = analyze_dh_pencil(pencil, tol)
            if (
                not report.hypotheses_hold
                or len(report.imaginary) < 2
                or not report.imaginary_semisimple_ok
                or not report.rqv_ok
                or report.counterexample
            ):
                failures.append((seed, n, undamped, complex_field, report.to_dict()["guarantees"]))
        assert failures == []

    def test_regular_random_pencils(self, tol):
        for seed in range(20):
            pencil = random_structured_pencil(6, 6, seed, regular=True, complex_field=seed % 2 == 1)
            report = analyze_dh_pencil(pencil, tol)
            assert report.left_indices_applicable
            assert not report.counterexample
            assert report.index_ok


class TestQuadratic:
    def test_double_zero(self, tol):
        report = analyze_quadratic([[1.0]], [[0.0]], [[0.0]], tol)
        assert report.linearization.zero_jordan_sizes == (2,)
        assert report.zero_chains_ok
        assert report.all_ok

    def test_infinite_chain(self, tol):
        report = analyze_quadratic([[0.0]], [[0.0]], [[1.0]], tol)
        assert report.linearization.eigen_data.index == 2
        assert report.infinite_chains_ok
        assert report.all_ok

    def test_undamped(self, tol):
        report = analyze_quadratic(np.eye(2), np.zeros((2, 2)), np.diag([1.0, 4.0]), tol)
        assert report.spectrum_ok
        assert report.is_regular
        assert len(report.linearization.imaginary) == 4

    def test_random_triples(self, tol):
        rng = np.random.default_rng(5)
        failures = []
        for trial in range(50):
            n = int(rng.integers(1, 5))
            full = trial % 2 == 0
            m = random_psd(rng, n, n if full else int(rng.integers(0, n + 1)))
            k = random_psd(rng, n, int(rng.integers(0, n + 1)) if full else n)
            d = random_psd(rng, n, int(rng.integers(0, n + 1)))
            report = analyze_quadratic(m, d, k, tol)
            if not report.all_ok:
                failures.append((trial, report.to_dict()))
        assert failures == []

    def test_singular_damping_shifts_right_indices_back(self, tol):
        report = analyze_quadratic(np.zeros((2, 2)), np.diag([1.0, 0.0]), np.zeros((2, 2)), tol)
        assert not report.is_regular
        assert report.linearization.eigen_data.right_minimal_indices == (1,)
        assert report.right_minimal_indices == (0,)
        assert report.left_minimal_indices == (0,)
        assert report.shift_consistent
        assert report.minimal_indices_zero

    def test_inconsistent_shift_is_not_ok(self, tol):
        report = analyze_quadratic([[1.0]], [[1.0]], [[1.0]], tol)
        assert report.all_ok
        broken = dataclasses.replace(report, shift_consistent=False)
        assert not broken.all_ok
        assert broken.to_dict()["shift_consistent"] is False

    def test_indefinite(self, tol):
        with pytest.raises(NotPsd):
            analyze_quadratic([[-1.0]], [[0.0]], [[1.0]], tol)

    def test_shapes(self, tol):
        with pytest.raises(ShapeMismatch):
            analyze_quadratic([[1.0]], np.eye(2), [[1.0]], tol)


class TestLyapunov:
    def test_general_certificate(self, tol):
        pencil = fixture("mechanical")
        report = lyapunov_check(pencil.E, pencil.A, pencil.Q, tol)
        assert report.passed
        assert report.stability is not None
        assert report.cross_check_ok
        assert report.guarantees_confirmed

    def test_square_invertible(self, tol):
        pencil = fixture("mechanical")
        report = lyapunov_check(pencil.E, pencil.A, pencil.Q, tol, variant="square_invertible")
        assert report.passed
        assert report.general_agrees
        assert report.lyapunov_residual == pytest.approx(0.0, abs=1e-10)

    def test_unstable(self, tol):
        report = lyapunov_check(np.eye(2), np.eye(2), np.eye(2), tol)
        assert not report.passed
        assert not report.conditions["dissipative"].passed
        assert report.stability is None
        assert not report.guarantees_confirmed

    def test_variants_agree_for_invertible_q(self, tol):
        rng = np.random.default_rng(44)
        disagreements = []
        verdicts = set()
        for trial in range(100):
            n = int(rng.integers(2, 7))
            u, _ = np.linalg.qr(rng.standard_normal((n, n)))
            v, _ = np.linalg.qr(rng.standard_normal((n, n)))
            q = (u * np.exp(rng.uniform(-0.5, 0.5, size=n))) @ v
            e = np.linalg.inv(q).T @ random_psd(rng, n, int(rng.integers(1, n + 1)))
            g = rng.standard_normal((n, n))
            ell = (g - g.T) / 2
            stable = trial % 2 == 0
            if stable:
                ell = ell - random_psd(rng, n, n) / n - 0.1 * np.eye(n)
            else:
                w = rng.standard_normal((n, 1))
                ell = ell + w @ w.T
            report = lyapunov_check(e, ell @ q, q, tol, variant="square_invertible")
            verdicts.add(report.passed)
            if report.passed != stable or not report.general_agrees:
                disagreements.append((trial, n, stable, report.to_dict()["conditions"]))
        assert disagreements == []
        assert verdicts == {True, False}

    def test_singular_q(self, tol):
        d = np.diag([1.0, 0.0])
        general = lyapunov_check(d, -d, d, tol)
        assert general.passed
        square = lyapunov_check(d, -d, d, tol, variant="square_invertible")
        assert not square.conditions["q_invertible"].passed
        assert square.general_agrees is False

    def test_kernel_inclusion(self, tol):
        report = lyapunov_check(np.eye(2), np.array([[0.0, 1.0], [0.0, 0.0]]), np.diag([1.0, 0.0]), tol)
        assert not report.conditions["kernel_inclusion"].passed

    def test_shape_mismatch(self, tol):
        with pytest.raises(ShapeMismatch):
            lyapunov_check(np.eye(2), np.eye(2), np.eye(3), tol)

    def test_to_dict(self, tol):
        pencil = fixture("mechanical")
        data = lyapunov_check(pencil.E, pencil.A, pencil.Q, tol).to_dict()
        assert data["variant"] == "general"
        assert data["passed"] is True
        assert set(data["conditions"]) == {
            "minimal_indices_zero", "product_psd", "dissipative", "kernel_inclusion",
        }
