"""Tests for Matrix Market files, manifests and analysis documents."""

import json

import numpy as np
import pytest

from dh_pencil.core.errors import InvalidInput, ParseError, ShapeMismatch, SymmetryViolation
from dh_pencil.forms import random_structured_pencil
from dh_pencil.io import (
    AnalysisDocument,
    MatrixSource,
    PencilDescriptor,
    format_matrix_market,
    load_manifest,
    load_pencil,
    parse_matrix_market,
    read_matrix_market,
    write_matrix_market,
)
from dh_pencil.kronecker import staircase
from dh_pencil.pencils import check_structure, fixture


class TestParseMatrixMarket:
    def test_identity_array(self):
        text = "%%MatrixMarket matrix array real general\n% comment\n2 2\n1\n0\n0\n1\n"
        np.testing.assert_array_equal(parse_matrix_market(text), np.eye(2))

    def test_column_major_order(self):
        text = "%%MatrixMarket matrix array real general\n2 3\n1\n2\n3\n4\n5\n6\n"
        np.testing.assert_array_equal(parse_matrix_market(text), [[1, 3, 5], [2, 4, 6]])

    def test_skew_coordinate_expands(self):
        text = "%%MatrixMarket matrix coordinate real skew-symmetric\n2 2 1\n2 1 1.0\n"
        np.testing.assert_array_equal(parse_matrix_market(text), [[0.0, -1.0], [1.0, 0.0]])

    def test_symmetric_array(self):
        text = "%%MatrixMarket matrix array real symmetric\n2 2\n1\n2\n3\n"
        np.testing.assert_array_equal(parse_matrix_market(text), [[1, 2], [2, 3]])

    def test_hermitian(self):
        text = "%%MatrixMarket matrix coordinate complex hermitian\n2 2 2\n1 1 2 0\n2 1 1 1\n"
        a = parse_matrix_market(text)
        np.testing.assert_array_equal(a, [[2, 1 - 1j], [1 + 1j, 0]])

    def test_integer_field(self):
        text = "%%MatrixMarket matrix coordinate integer general\n1 2 1\n1 2 7\n"
        a = parse_matrix_market(text)
        assert a.dtype == np.float64
        np.testing.assert_array_equal(a, [[0.0, 7.0]])

    @pytest.mark.parametrize(
        ("text", "line"),
        [
            ("%%MatrixMarket matrix array real\n2 2\n", 1),
            ("%%MatrixMarket matrix array quaternion general\n1 1\n1\n", 1),
            ("%%MatrixMarket matrix array real general\n2 x\n", 2),
            ("%%MatrixMarket matrix array real general\n1 1\nabc\n", 3),
            ("%%MatrixMarket matrix array real general\n1 1\n1\n2\n", 4),
            ("%%MatrixMarket matrix array real general\n% c\n1 2\n1\n", 4),
            ("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n", 3),
            ("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n1 1 2\n", 4),
            ("%%MatrixMarket matrix array real general\n1 1\nnan\n", 3),
        ],
    )
    def test_errors_carry_line_numbers(self, text, line):
        with pytest.raises(ParseError) as info:
            parse_matrix_market(text, "bad.mtx")
        assert info.value.line == line
        assert f"bad.mtx:{line}" in str(info.value)

    def test_empty(self):
        with pytest.raises(ParseError):
            parse_matrix_market("")

    def test_upper_triangle_in_symmetric_storage(self):
        text = "%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 2 1.0\n"
        with pytest.raises(SymmetryViolation):
            parse_matrix_market(text)

    def test_nonzero_skew_diagonal(self):
        text = "%%MatrixMarket matrix coordinate real skew-symmetric\n2 2 1\n1 1 1.0\n"
        with pytest.raises(SymmetryViolation):
            parse_matrix_market(text)


class TestWriteMatrixMarket:
    def test_exact_round_trip(self, rng, tmp_path):
        a = rng.standard_normal((3, 4)) * 10.0 ** rng.integers(-8, 8, size=(3, 4))
        path = write_matrix_market(a, tmp_path / "nested" / "a.mtx")
        np.testing.assert_array_equal(read_matrix_market(path), a)

    def test_complex_round_trip(self, rng):
        a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        text = format_matrix_market(a)
        assert text.startswith("%%MatrixMarket matrix array complex general\n")
        np.testing.assert_array_equal(parse_matrix_market(text), a)

    def test_symmetric_coordinate(self):
        a = np.array([[2.0, 0.0], [0.0, 3.0]])
        text = format_matrix_market(a, symmetry="symmetric", storage="coordinate")
        assert text.splitlines()[1] == "2 2 2"
        np.testing.assert_array_equal(parse_matrix_market(text), a)

    def test_skew_storage(self):
        a = np.array([[0.0, -1.5], [1.5, 0.0]])
        text = format_matrix_market(a, symmetry="skew-symmetric")
        assert text.splitlines()[1:] == ["2 2", "1.5e+00"]
        np.testing.assert_array_equal(parse_matrix_market(text), a)

    def test_comment(self):
        text = format_matrix_market(np.eye(1), comment="first\nsecond")
        assert text.splitlines()[1:3] == ["% first", "% second"]

    def test_rejects_wrong_symmetry(self):
        with pytest.raises(SymmetryViolation):
            format_matrix_market(np.array([[1.0, 2.0], [0.0, 1.0]]), symmetry="symmetric")

    def test_rejects_unknown_storage(self):
        with pytest.raises(InvalidInput):
            format_matrix_market(np.eye(2), storage="packed")

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(ParseError):
            read_matrix_market(tmp_path / "missing.mtx")


class TestDescriptor:
    def test_export_and_load(self, export_fixture):
        manifest = export_fixture("mechanical")
        assert manifest.name == "mechanical.json"
        original = fixture("mechanical")
        loaded = load_pencil(manifest)
        assert loaded.name == "mechanical"
        np.testing.assert_array_equal(loaded.E, original.E)
        np.testing.assert_array_equal(loaded.Q, original.Q)
        np.testing.assert_array_equal(loaded.L, original.L)

    def test_export_sanitizes_name(self, export_fixture):
        manifest = export_fixture("ex:rhp", a=2.0)
        assert manifest.name == "ex_rhp.json"
        assert (manifest.parent / "ex_rhp_L.mtx").exists()
        assert check_structure(load_pencil(manifest)).dh_hypotheses

    def test_complex_export(self, export_pencil):
        pencil = random_structured_pencil(3, 3, 1, complex_field=True)
        loaded = load_pencil(export_pencil(pencil, "complex"))
        assert loaded.field == "complex"
        np.testing.assert_array_equal(loaded.Q, pencil.Q)

    def test_inline_manifest(self, pencil_dir):
        path = pencil_dir / "inline.json"
        path.write_text(json.dumps({"E": {"real": [[1, 0], [0, 1]]}, "Q": {"real": [[1, 0], [0, 0]]}}))
        pencil = load_pencil(path)
        assert pencil.name == "inline"
        np.testing.assert_array_equal(pencil.L, np.eye(2))

    def test_inline_complex(self, pencil_dir):
        descriptor = PencilDescriptor(
            field="complex",
            E=MatrixSource(real=[[1.0]]),
            Q=MatrixSource(real=[[0.0]], imag=[[2.0]]),
        )
        pencil = descriptor.load(pencil_dir)
        assert pencil.Q[0, 0] == 2j

    def test_inline_round_trip(self):
        pencil = fixture("nonsimple0")
        restored = PencilDescriptor.inline(pencil).load()
        np.testing.assert_array_equal(restored.L, pencil.L)
        assert staircase(restored.E, restored.A).structure.zero_jordan_sizes == (2,)

    def test_complex_under_real_field(self):
        descriptor = PencilDescriptor(E=MatrixSource(real=[[1.0]]), Q=MatrixSource(real=[[1.0]], imag=[[1.0]]))
        with pytest.raises(InvalidInput):
            descriptor.load()

    def test_source_needs_exactly_one_kind(self):
        with pytest.raises(ValueError):
            MatrixSource()
        with pytest.raises(ValueError):
            MatrixSource(path="a.mtx", real=[[1.0]])

    def test_shape_mismatch(self, pencil_dir):
        write_matrix_market(np.eye(2), pencil_dir / "e.mtx")
        write_matrix_market(np.eye(3), pencil_dir / "q.mtx")
        path = pencil_dir / "bad.json"
        path.write_text(json.dumps({"E": {"path": "e.mtx"}, "Q": {"path": "q.mtx"}}))
        with pytest.raises(ShapeMismatch):
            load_pencil(path)

    def test_invalid_json_line(self, pencil_dir):
        path = pencil_dir / "broken.json"
        path.write_text('{\n  "E": \n}\n')
        with pytest.raises(ParseError) as info:
            load_manifest(path)
        assert info.value.line == 3

    def test_invalid_manifest(self, pencil_dir):
        path = pencil_dir / "invalid.json"
        path.write_text(json.dumps({"E": {"real": [[1.0]]}}))
        with pytest.raises(ParseError, match="Q"):
            load_manifest(path)


class TestAnalysisDocument:
    def make(self, tol):
        pencil = fixture("nonsimple0")
        return AnalysisDocument(
            name=pencil.name,
            tolerance=tol,
            structure=check_structure(pencil, tol),
            kronecker=staircase(pencil.E, pencil.A, tol).structure,
            stability={"lhp_ok": True, "value": 0.1 + 0.2},
            extras={"note": "x"},
        )

    def test_round_trip(self, tol, tmp_path):
        document = self.make(tol)
        path = document.save(tmp_path / "doc.json")
        restored = AnalysisDocument.load(path)
        assert restored.to_dict() == document.to_dict()
        assert restored.stability["value"] == 0.1 + 0.2
        assert restored.kronecker.zero_jordan_sizes == (2,)

    def test_deterministic_json(self, tol):
        assert self.make(tol).to_json() == self.make(tol).to_json()

    def test_invalid_json(self):
        with pytest.raises(ParseError):
            AnalysisDocument.from_json("{")

    def test_missing_section(self, tol):
        data = self.make(tol).to_dict()
        del data["kronecker"]
        with pytest.raises(ParseError):
            AnalysisDocument.from_dict(data)
