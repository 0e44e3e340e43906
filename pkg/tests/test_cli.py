"""Tests for the dh-pencil command line."""

import json

import numpy as np
import pytest
from typer.testing import CliRunner

from dh_pencil.cli import app, exit_code_for_error, main
from dh_pencil.core.errors import IndexTooHigh, ParseError, ShapeMismatch
from dh_pencil.io import load_pencil, write_matrix_market
from dh_pencil.kronecker import staircase
from dh_pencil.services import AnalysisService


@pytest.fixture
def invoke(tmp_path):
    runner = CliRunner()
    config = tmp_path / "config" / "config.json"

    def _invoke(*args: str):
        return runner.invoke(app, ["--config", str(config), "--no-log-file", *args])

    return _invoke


class TestCheck:
    def test_hypotheses_hold(self, invoke, export_fixture):
        result = invoke("check", str(export_fixture("ex:rhp", a=2.0)), "--format", "json")
        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert data["name"] == "ex:rhp"
        assert data["dh_hypotheses"] is True
        assert data["eq_structure"]["left_minimal_indices"] == [1]

    def test_text_output(self, invoke, export_fixture):
        result = invoke("check", str(export_fixture("nonsimple0")))
        assert result.exit_code == 0
        assert "dh_hypotheses: true" in result.stdout

    def test_hypotheses_fail(self, invoke, export_fixture):
        result = invoke("check", str(export_fixture("ex:sp")), "--format", "json")
        assert result.exit_code == 1
        assert "b1c" in json.loads(result.stdout)["failures"]

    def test_mismatched_shapes(self, invoke, pencil_dir):
        write_matrix_market(np.eye(2), pencil_dir / "e.mtx")
        write_matrix_market(np.eye(3), pencil_dir / "q.mtx")
        manifest = pencil_dir / "bad.json"
        manifest.write_text(json.dumps({"E": {"path": "e.mtx"}, "Q": {"path": "q.mtx"}}))
        assert invoke("check", str(manifest)).exit_code == 2

    def test_missing_manifest(self, invoke, tmp_path):
        assert invoke("check", str(tmp_path / "absent.json")).exit_code == 2

    def test_invalid_tolerance(self, invoke, export_fixture):
        assert invoke("check", str(export_fixture("nonsimple0")), "--tol", "-1").exit_code == 2


class TestAnalyze:
    def test_matches_library(self, invoke, export_fixture, tol):
        manifest = export_fixture("nonsimple0")
        result = invoke("analyze", str(manifest), "--format", "json")
        assert result.exit_code == 0
        service = AnalysisService(tol)
        expected = service.analyze(load_pencil(manifest))
        assert json.loads(result.stdout) == json.loads(expected.to_json())

    def test_writes_document(self, invoke, export_fixture, tmp_path):
        out = tmp_path / "out"
        result = invoke("analyze", str(export_fixture("index-two")), "--out", str(out), "--format", "json")
        assert result.exit_code == 0
        saved = json.loads((out / "index-two.analysis.json").read_text())
        assert saved["kronecker"]["index"] == 2

    def test_needs_one_source(self, invoke, export_fixture, pencil_dir):
        assert invoke("analyze").exit_code == 2
        manifest = export_fixture("nonsimple0")
        assert invoke("analyze", str(manifest), "--batch", str(pencil_dir)).exit_code == 2

    def test_batch(self, invoke, export_fixture, pencil_dir, tmp_path):
        export_fixture("nonsimple0")
        export_fixture("ex:sp")
        out = tmp_path / "docs"
        result = invoke("analyze", "--batch", str(pencil_dir), "--out", str(out), "--format", "json")
        assert result.exit_code == 1
        summary = json.loads(result.stdout)
        assert summary["count"] == 2
        assert (out / "nonsimple0.analysis.json").exists()
        assert (out / "ex_sp.analysis.json").exists()


class TestCondense:
    @pytest.mark.parametrize("which", ["section5", "zero"])
    def test_zero_form(self, invoke, export_fixture, tmp_path, which):
        out = tmp_path / "zero"
        result = invoke("condense", str(export_fixture("nonsimple0")), "--which", which, "--out", str(out))
        assert result.exit_code == 0
        manifest = json.loads((out / "nonsimple0_zero.json").read_text())
        assert manifest["form"] == "zero"
        assert manifest["details"]["partition"] == [0, 1, 1, 0]

    def test_unknown_form(self, invoke, export_fixture, tmp_path):
        result = invoke("condense", str(export_fixture("nonsimple0")), "--which", "jordan", "--out", str(tmp_path))
        assert result.exit_code == 2

    def test_eq_form(self, invoke, export_fixture, tmp_path):
        result = invoke("condense", str(export_fixture("ex:sp")), "--out", str(tmp_path), "--format", "json")
        assert result.exit_code == 0
        assert json.loads(result.stdout)["form"] == "eq"

    def test_index_too_high(self, invoke, export_fixture, tmp_path):
        result = invoke("condense", str(export_fixture("index-two")), "--which", "zero", "--out", str(tmp_path))
        assert result.exit_code == 3


class TestStabilize:
    def test_zero_mode(self, invoke, export_fixture, tmp_path, tol):
        out = tmp_path / "perturbed"
        result = invoke("stabilize", str(export_fixture("nonsimple0")), "--out", str(out), "--format", "json")
        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert data["perturbation"]["mode"] == "skew_only"
        assert data["perturbation"]["verified"] is True
        assert data["perturbation"]["zero_jordan_sizes_after"] == [1, 1]
        assert data["stability"]["zero_jordan_sizes"] == [1, 1]
        perturbed = load_pencil(data["files"]["perturbed"])
        assert staircase(perturbed.E, perturbed.A, tol).structure.zero_jordan_sizes == (1, 1)

    def test_mixed_needs_y(self, invoke, export_fixture):
        assert invoke("stabilize", str(export_fixture("nonsimple0")), "--mode", "mixed").exit_code == 2

    def test_y_only_for_mixed(self, invoke, export_fixture, pencil_dir):
        y = write_matrix_market(np.zeros((1, 1)), pencil_dir / "y.mtx")
        result = invoke("stabilize", str(export_fixture("nonsimple0")), "--y", str(y))
        assert result.exit_code == 2

    def test_symmetric_infeasible(self, invoke, export_fixture):
        result = invoke("stabilize", str(export_fixture("nonsimple0")), "--mode", "symmetric-only")
        assert result.exit_code == 3

    def test_mixed_range_violation(self, invoke, export_fixture, pencil_dir):
        y = write_matrix_market(np.ones((1, 1)), pencil_dir / "y.mtx")
        result = invoke("stabilize", str(export_fixture("nonsimple0")), "--mode", "mixed", "--y", str(y))
        assert result.exit_code == 3


class TestGenerate:
    def test_list(self, invoke):
        result = invoke("generate", "list")
        assert result.exit_code == 0
        assert "nonsimple0: " in result.stdout

    def test_fixture(self, invoke, tmp_path):
        result = invoke("generate", "fixture", "rem:ind", "-p", "n=4", "--out", str(tmp_path), "--format", "json")
        assert result.exit_code == 0
        assert load_pencil(json.loads(result.stdout)["manifest"]).shape == (4, 4)

    def test_unknown_fixture(self, invoke, tmp_path):
        assert invoke("generate", "fixture", "nope", "--out", str(tmp_path)).exit_code == 2

    def test_left_indices(self, invoke, tmp_path, tol):
        result = invoke(
            "generate", "left-indices", "--eta", "2,1", "--n", "6", "--m", "5", "--seed", "3",
            "--out", str(tmp_path), "--format", "json",
        )
        assert result.exit_code == 0
        pencil = load_pencil(json.loads(result.stdout)["manifest"])
        assert staircase(pencil.E, pencil.Q, tol).structure.left_minimal_indices == (2, 1)

    def test_left_indices_errors(self, invoke, tmp_path):
        args = ("generate", "left-indices", "--n", "3", "--m", "3", "--out", str(tmp_path))
        assert invoke(*args, "--eta", "a,b").exit_code == 2
        assert invoke(*args, "--eta", "3").exit_code == 3

    def test_random(self, invoke, tmp_path):
        result = invoke(
            "generate", "random", "--n", "4", "--m", "3", "--seed", "2", "--out", str(tmp_path),
            "--format", "json",
        )
        assert result.exit_code == 0
        assert load_pencil(json.loads(result.stdout)["manifest"]).shape == (4, 3)


class TestExitCodes:
    def test_error_classes(self):
        assert exit_code_for_error(ParseError("bad")) == 2
        assert exit_code_for_error(ShapeMismatch("bad")) == 2
        assert exit_code_for_error(IndexTooHigh(2)) == 3

    def test_main_returns_code(self, export_fixture, tmp_path):
        config = tmp_path / "config.json"
        manifest = export_fixture("ex:sp")
        assert main(["--config", str(config), "--no-log-file", "check", str(manifest)]) == 1
