"""Analysis service - loading, analysis, condensed forms and stabilization of pencils."""

import concurrent.futures
import json
import logging
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Literal

import numpy as np
from numpy.typing import ArrayLike

from ..core.errors import DhPencilError
from ..forms.condensed import CondensedFormEQ, condensed_form_EQ
from ..io.descriptor import PencilDescriptor, load_pencil
from ..io.document import AnalysisDocument, json_default
from ..io.matrix_market import read_matrix_market, write_matrix_market
from ..kronecker.staircase import staircase
from ..kronecker.structure import KroneckerStructure
from ..linalg.kernels import Matrix
from ..linalg.tolerance import DEFAULT_TOLERANCE, Tolerance
from ..pencils.structure_check import StructureReport, check_structure
from ..pencils.structured_pencil import StructuredPencil
from ..stability.dh_analysis import analyze_dh_pencil
from ..stabilization.perturbation import Preset, StabilizingPerturbation, stabilize
from ..stabilization.zero_form import ZeroForm, zero_condensed_form, zero_semisimple_test

Which = Literal["eq", "zero"]

EXIT_OK = 0
EXIT_HYPOTHESES = 1


@dataclass(frozen=True)
class CheckOutcome:
    """Structural checks of ``P`` plus the Kronecker data of ``lambda E - Q``."""

    structure: StructureReport
    eq_structure: KroneckerStructure

    @property
    def exit_code(self) -> int:
        return EXIT_OK if self.structure.dh_hypotheses else EXIT_HYPOTHESES

    def to_dict(self) -> dict[str, Any]:
        return {
            "structure": self.structure.to_dict(),
            "dh_hypotheses": self.structure.dh_hypotheses,
            "failures": self.structure.failures(),
            "eq_structure": self.eq_structure.to_dict(),
        }


@dataclass(frozen=True)
class BatchItem:
    """Outcome for one manifest of a batch run."""

    path: Path
    document: AnalysisDocument | None = None
    error: str | None = None
    exit_code: int = EXIT_OK

    def to_dict(self) -> dict[str, Any]:
        return {"path": str(self.path), "exit_code": self.exit_code, "error": self.error}


class AnalysisService:
    """Runs the library operations behind every command."""

    def __init__(self, tol: Tolerance = DEFAULT_TOLERANCE, max_workers: int = 4) -> None:
        self.logger = logging.getLogger(__name__)
        self.tol = tol
        self.max_workers = max_workers

    def load(self, manifest: Path | str) -> StructuredPencil:
        """Load a pencil from its manifest."""
        try:
            return load_pencil(manifest)
        except DhPencilError as e:
            self.logger.error(f"Failed to load {manifest}: {e}")
            raise

    def check(self, pencil: StructuredPencil) -> CheckOutcome:
        structure = check_structure(pencil, self.tol)
        eq_structure = staircase(pencil.E, pencil.Q, self.tol).structure
        if not structure.dh_hypotheses:
            self.logger.info(f"{pencil!r}: hypotheses failed: {structure.failures()}")
        return CheckOutcome(structure, eq_structure)

    def analyze(self, pencil: StructuredPencil) -> AnalysisDocument:
        """Structure checks, Kronecker data, stability and whichever condensed forms apply."""
        stability = analyze_dh_pencil(pencil, self.tol)
        condensed: dict[str, Any] = {}
        extras: dict[str, Any] = {}
        try:
            condensed["eq"] = condensed_form_EQ(pencil.E, pencil.Q, self.tol).to_dict()
        except DhPencilError as e:
            extras["eq_form"] = str(e)
        try:
            form = zero_condensed_form(pencil, self.tol)
            condensed["zero"] = form.to_dict()
            condensed["zero"]["semisimple_test"] = zero_semisimple_test(form, self.tol).to_dict()
        except DhPencilError as e:
            extras["zero_form"] = str(e)
        return AnalysisDocument(
            name=pencil.name,
            tolerance=self.tol,
            structure=stability.hypothesis_report,
            kronecker=stability.eigen_data,
            stability=stability.to_dict(),
            condensed=condensed or None,
            extras=extras,
        )

    def exit_code_for(self, document: AnalysisDocument) -> int:
        return EXIT_OK if document.structure.dh_hypotheses else EXIT_HYPOTHESES

    def condense(self, pencil: StructuredPencil, which: Which, out_dir: Path | str) -> dict[str, Any]:
        """Write a condensed form as Matrix Market files plus a JSON manifest.

        Raises:
            DhPencilError: If the requested form does not exist for ``pencil``.
        """
        out = Path(out_dir)
        stem = (pencil.name or "pencil").replace(":", "_")
        matrices: dict[str, Matrix]
        details: dict[str, Any]
        if which == "eq":
            eq_form: CondensedFormEQ = condensed_form_EQ(pencil.E, pencil.Q, self.tol)
            matrices = {
                "U": eq_form.U, "X": eq_form.X,
                "E": eq_form.assembled_E(), "Q": eq_form.assembled_Q(),
            }
            res_e, res_q = eq_form.round_trip_residuals(pencil.E, pencil.Q)
            details = eq_form.to_dict() | {"residual_E": res_e, "residual_Q": res_q}
        else:
            zero_form: ZeroForm = zero_condensed_form(pencil, self.tol)
            matrices = {
                "U": zero_form.U, "X": zero_form.X, "E": zero_form.E,
                "Q": zero_form.Q, "L": zero_form.L, "A": zero_form.A,
            }
            details = zero_form.to_dict() | {
                "residuals": zero_form.round_trip_residuals(),
                "semisimple_test": zero_semisimple_test(zero_form, self.tol).to_dict(),
            }
        files: dict[str, str] = {}
        for key, m in matrices.items():
            file_name = f"{stem}_{which}_{key}.mtx"
            write_matrix_market(m, out / file_name)
            files[key] = file_name
        manifest = {"name": pencil.name, "form": which, "files": files, "details": details}
        manifest_path = out / f"{stem}_{which}.json"
        manifest_path.write_text(
            json.dumps(manifest, indent=2, sort_keys=True, default=json_default) + "\n", encoding="utf-8"
        )
        self.logger.info(f"Wrote {which} condensed form of {pencil!r} to {manifest_path}")
        return manifest | {"manifest": str(manifest_path)}

    def stabilize(
        self, pencil: StructuredPencil, y: Preset | ArrayLike = "zero"
    ) -> tuple[StabilizingPerturbation, AnalysisDocument]:
        """Stabilizing perturbation and the analysis of the perturbed pencil."""
        try:
            result = stabilize(pencil, y, self.tol, workers=self.max_workers)
        except DhPencilError as e:
            self.logger.error(f"Stabilization of {pencil!r} failed: {e}")
            raise
        document = self.analyze(result.perturbed)
        document.perturbation = result.to_dict()
        return result, document

    def write_perturbation(
        self, result: StabilizingPerturbation, out_dir: Path | str, stem: str
    ) -> dict[str, str]:
        """Write ``dJ``, ``dR`` and the perturbed pencil manifest."""
        out = Path(out_dir)
        files = {
            "delta_J": str(write_matrix_market(result.delta_J, out / f"{stem}_delta_J.mtx")),
            "delta_R": str(write_matrix_market(result.delta_R, out / f"{stem}_delta_R.mtx")),
        }
        _, manifest = PencilDescriptor.export(result.perturbed, out, stem=f"{stem}_perturbed")
        files["perturbed"] = str(manifest)
        return files

    def read_matrix(self, path: Path | str) -> np.ndarray:
        return read_matrix_market(path)

    def analyze_batch(self, directory: Path | str, pattern: str = "*.json") -> list[BatchItem]:
        """Analyze every manifest in ``directory`` concurrently; failures do not stop the batch."""
        manifests = sorted(Path(directory).glob(pattern))
        items: list[BatchItem] = []
        start_time = time.time()

        with concurrent.futures.ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            future_to_path = {executor.submit(self._analyze_file, path): path for path in manifests}
            for future in concurrent.futures.as_completed(future_to_path):
                path = future_to_path[future]
                try:
                    items.append(future.result())
                except DhPencilError as e:
                    self.logger.error(f"Error analyzing {path}: {e}")
                    items.append(BatchItem(path, error=str(e), exit_code=2))

        elapsed = time.time() - start_time
        self.logger.info(f"Analyzed {len(manifests)} manifests in {elapsed:.2f}s")
        return sorted(items, key=lambda item: str(item.path))

    def _analyze_file(self, path: Path) -> BatchItem:
        document = self.analyze(self.load(path))
        return BatchItem(path, document=document, exit_code=self.exit_code_for(document))
