"""Tests for structured pencils, structural checks and the fixture registry."""

import numpy as np
import pytest

from dh_pencil.core.errors import InvalidParams, NonSquare, ShapeMismatch, UnknownFixture
from dh_pencil.pencils import StructuredPencil, check_structure, fixture, list_fixtures, split_dissipative
from dh_pencil.pencils.fixtures.core import get_registry


class TestSplitDissipative:
    def test_split_is_unique_and_reconstructs(self, rng):
        ell = rng.standard_normal((4, 4))
        j, r = split_dissipative(ell)
        np.testing.assert_allclose(j, -j.T)
        np.testing.assert_allclose(r, r.T)
        np.testing.assert_allclose(j - r, ell)

    def test_complex(self, rng):
        ell = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        j, r = split_dissipative(ell)
        np.testing.assert_allclose(j, -j.conj().T)
        np.testing.assert_allclose(r, r.conj().T)
        np.testing.assert_allclose(j - r, ell)

    def test_non_square(self):
        with pytest.raises(NonSquare):
            split_dissipative(np.zeros((2, 3)))


class TestStructuredPencil:
    def test_identity_default(self):
        pencil = StructuredPencil(E=np.eye(2), Q=np.diag([1.0, 2.0]))
        np.testing.assert_array_equal(pencil.L, np.eye(2))
        np.testing.assert_array_equal(pencil.A, np.diag([1.0, 2.0]))
        assert pencil.shape == (2, 2)
        assert pencil.field == "real"

    def test_rectangular(self):
        pencil = StructuredPencil(E=np.ones((3, 2)), Q=np.zeros((3, 2)), L=-np.eye(3))
        assert pencil.shape == (3, 2)
        assert pencil.A.shape == (3, 2)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            StructuredPencil(E=np.eye(2), Q=np.eye(3))
        with pytest.raises(ShapeMismatch):
            StructuredPencil(E=np.eye(2), Q=np.eye(2), L=np.eye(3))

    def test_from_parts(self):
        j = np.array([[0.0, 1.0], [-1.0, 0.0]])
        r = np.diag([2.0, 0.0])
        pencil = StructuredPencil.from_parts(E=np.eye(2), Q=np.eye(2), J=j, R=r)
        np.testing.assert_allclose(pencil.J, j)
        np.testing.assert_allclose(pencil.R, r)

    def test_complex_field(self):
        pencil = StructuredPencil(E=np.eye(2), Q=1j * np.eye(2))
        assert pencil.field == "complex"

    def test_perturbed(self):
        pencil = fixture("nonsimple0")
        dj = np.array([[0.0, 1.0], [-1.0, 0.0]])
        dr = np.diag([0.0, 1.0])
        moved = pencil.perturbed(dj, dr)
        np.testing.assert_allclose(moved.J, pencil.J + dj)
        np.testing.assert_allclose(moved.R, pencil.R + dr)
        half = pencil.perturbed(dj, dr, s=0.5, t=0.25)
        np.testing.assert_allclose(half.L, pencil.L + 0.5 * dj - 0.25 * dr)

    def test_perturbed_shape(self):
        with pytest.raises(ShapeMismatch):
            fixture("nonsimple0").perturbed(np.zeros((3, 3)), np.zeros((2, 2)))

    def test_adjoint_pencil(self):
        pencil = fixture("exdefl")
        e_adj, a_adj = pencil.adjoint_pencil()
        np.testing.assert_array_equal(e_adj, pencil.E.T)
        np.testing.assert_array_equal(a_adj, pencil.A.T)

    def test_repr(self):
        assert repr(fixture("nonsimple0")) == "StructuredPencil 'nonsimple0'(n=2, m=2, field=real)"


class TestCheckStructure:
    @pytest.mark.parametrize("fixture_id", get_registry().get_fixture_ids())
    def test_documented_flags(self, fixture_id, tol):
        registered = get_registry().get_fixture(fixture_id)
        report = check_structure(registered.create(), tol)
        results = report.results()
        for key, expected in registered.get_expected_structure().stated().items():
            assert bool(results[key].passed) == expected, f"{fixture_id}: {key}"

    def test_hypotheses(self):
        assert check_structure(fixture("nonsimple0")).dh_hypotheses
        assert check_structure(fixture("ex:rhp")).dh_hypotheses
        report = check_structure(fixture("ex:sp"))
        assert not report.dh_hypotheses
        assert "b1c" in report.failures()

    def test_negative_dissipation(self):
        pencil = StructuredPencil(E=np.eye(2), Q=np.eye(2), L=np.eye(2))
        report = check_structure(pencil)
        assert not report.r_psd.passed
        assert not report.dissipative.passed
        assert report.r_psd.value == pytest.approx(-1.0)

    def test_loosening_never_breaks_a_pass(self, rng, tol):
        q = rng.standard_normal((3, 3))
        e = q @ np.diag([1.0, 2.0, 0.0]) + 1e-9 * rng.standard_normal((3, 3))
        strict = check_structure(StructuredPencil(E=e, Q=q), tol)
        loose = check_structure(StructuredPencil(E=e, Q=q), tol.with_relative(1e-4))
        for key, result in strict.results().items():
            if result.passed:
                assert loose.results()[key].passed

    def test_report_round_trip(self):
        report = check_structure(fixture("ex:rhp"))
        assert type(report).from_dict(report.to_dict()) == report


class TestFixtureRegistry:
    def test_known_fixtures(self):
        ids = {f.fixture_id for f in list_fixtures()}
        assert {
            "ex:rhp", "nonsimple0", "index-two", "right-index-one", "rem:ind", "exdefl",
            "ex:sp", "mechanical", "constrained-mechanical", "rlc", "stokes", "gas-network",
        } <= ids

    def test_sorted(self):
        ids = [f.fixture_id for f in list_fixtures()]
        assert ids == sorted(ids)

    def test_name_and_metadata(self):
        pencil = fixture("index-two")
        assert pencil.name == "index-two"
        assert pencil.metadata == {"fixture": "index-two"}

    def test_unknown(self):
        with pytest.raises(UnknownFixture):
            fixture("no-such-pencil")

    def test_unknown_parameter(self):
        with pytest.raises(InvalidParams):
            fixture("nonsimple0", a=1.0)

    def test_scalar_bounds(self):
        with pytest.raises(InvalidParams):
            fixture("ex:rhp", a=0.0)
        with pytest.raises(InvalidParams):
            fixture("ex:rhp", a="abc")
        pencil = fixture("ex:rhp", a=2.5)
        assert pencil.Q[1, 0] == 2.5

    def test_integer_parameter(self):
        assert fixture("rem:ind", n="5").shape == (5, 5)
        with pytest.raises(InvalidParams):
            fixture("rem:ind", n=1)

    def test_matrix_constraints(self):
        with pytest.raises(InvalidParams):
            fixture("mechanical", M=[[-1.0]])
        with pytest.raises(InvalidParams):
            fixture("mechanical", M=[[1.0, 0.0], [0.0, 1.0]])

    def test_mechanical_blocks(self):
        m = np.diag([2.0, 1.0])
        d = np.diag([0.5, 0.0])
        k = np.array([[2.0, -1.0], [-1.0, 2.0]])
        pencil = fixture("mechanical", M=m, D=d, K=k)
        assert pencil.shape == (4, 4)
        np.testing.assert_allclose(pencil.E[:2, :2], m)
        np.testing.assert_allclose(pencil.Q[2:, 2:], k)
        np.testing.assert_allclose(pencil.R[:2, :2], d)

    def test_rlc_requires_full_rank_sources(self):
        with pytest.raises(InvalidParams):
            fixture("rlc", Gv=[[0.0], [0.0]])

    def test_gas_network_sizes(self):
        pencil = fixture(
            "gas-network",
            M1=np.eye(2), M2=np.eye(3), G=np.ones((2, 3)), K=np.ones((1, 3)), D=np.eye(3),
        )
        assert pencil.shape == (6, 6)
        assert check_structure(pencil).dh_hypotheses
