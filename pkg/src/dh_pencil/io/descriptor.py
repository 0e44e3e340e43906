"""JSON manifests binding the coefficients ``E``, ``Q`` and ``L`` of one pencil."""

import json
import logging
from pathlib import Path
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, Field, ValidationError, model_validator

from ..core.errors import InvalidInput, ParseError
from ..linalg.kernels import Matrix, as_matrix
from ..pencils.structured_pencil import StructuredPencil
from .matrix_market import read_matrix_market, write_matrix_market

logger = logging.getLogger(__name__)

MANIFEST_SUFFIX = ".json"


class MatrixSource(BaseModel):
    """Either a Matrix Market path (relative to the manifest) or inline rows.

    Inline complex matrices give the imaginary parts in ``imag``.
    """

    path: str | None = None
    real: list[list[float]] | None = None
    imag: list[list[float]] | None = None

    @model_validator(mode="after")
    def validate_source(self) -> "MatrixSource":
        """Exactly one of ``path`` and ``real``; ``imag`` only next to ``real``."""
        if (self.path is None) == (self.real is None):
            raise ValueError("give either 'path' or inline 'real' rows")
        if self.imag is not None and self.real is None:
            raise ValueError("'imag' needs inline 'real' rows")
        return self

    @classmethod
    def inline(cls, a: Matrix) -> "MatrixSource":
        arr = np.asarray(a)
        if np.iscomplexobj(arr):
            return cls(real=arr.real.tolist(), imag=arr.imag.tolist())
        return cls(real=arr.tolist())

    def load(self, base_dir: Path, name: str) -> Matrix:
        """Materialize the matrix.

        Raises:
            ParseError: For unreadable files or ragged inline rows.
        """
        if self.path is not None:
            return read_matrix_market(base_dir / self.path)
        try:
            real = np.array(self.real, dtype=np.float64)
            if self.imag is None:
                return as_matrix(real, name)
            imag = np.array(self.imag, dtype=np.float64)
        except ValueError as e:
            raise ParseError(f"inline {name} has ragged rows: {e}") from e
        if real.shape != imag.shape:
            raise ParseError(f"inline {name}: real part {real.shape} but imaginary {imag.shape}")
        return as_matrix(real + 1j * imag, name)


class PencilDescriptor(BaseModel):
    """Manifest for ``lambda E - L Q``; ``L`` defaults to the identity."""

    name: str = ""
    field: Literal["real", "complex"] = "real"
    E: MatrixSource
    Q: MatrixSource
    L: MatrixSource | None = None
    metadata: dict[str, str] = Field(default_factory=dict)

    def load(self, base_dir: Path | str = ".") -> StructuredPencil:
        """Read the coefficients and build the pencil.

        Raises:
            ParseError: If a source cannot be read.
            InvalidInput: If complex entries appear under the real field.
            ShapeMismatch: If the shapes are incoherent.
        """
        base = Path(base_dir)
        matrices = {"E": self.E.load(base, "E"), "Q": self.Q.load(base, "Q")}
        if self.L is not None:
            matrices["L"] = self.L.load(base, "L")
        if self.field == "real":
            for key, m in matrices.items():
                if np.iscomplexobj(m):
                    if np.any(m.imag != 0):
                        raise InvalidInput(f"{key} has complex entries but the field is real")
                    matrices[key] = np.ascontiguousarray(m.real)
        return StructuredPencil(
            E=matrices["E"],
            Q=matrices["Q"],
            L=matrices.get("L"),
            name=self.name,
            metadata=dict(self.metadata),
        )

    @classmethod
    def inline(cls, pencil: StructuredPencil, metadata: dict[str, str] | None = None) -> "PencilDescriptor":
        """Descriptor carrying the coefficients inline."""
        assert pencil.L is not None
        return cls(
            name=pencil.name,
            field=pencil.field,
            E=MatrixSource.inline(pencil.E),
            Q=MatrixSource.inline(pencil.Q),
            L=MatrixSource.inline(pencil.L),
            metadata=metadata or {},
        )

    @classmethod
    def export(
        cls,
        pencil: StructuredPencil,
        directory: Path | str,
        stem: str | None = None,
        metadata: dict[str, str] | None = None,
    ) -> tuple["PencilDescriptor", Path]:
        """Write ``E``, ``Q``, ``L`` as Matrix Market files and a manifest next to them.

        Returns:
            The descriptor and the manifest path.
        """
        assert pencil.L is not None
        out = Path(directory)
        base = stem or pencil.name or "pencil"
        base = base.replace(":", "_").replace("/", "_")
        sources: dict[str, MatrixSource] = {}
        for key, m in (("E", pencil.E), ("Q", pencil.Q), ("L", pencil.L)):
            file_name = f"{base}_{key}.mtx"
            write_matrix_market(m, out / file_name, comment=f"{key} of {pencil.name or base}")
            sources[key] = MatrixSource(path=file_name)
        descriptor = cls(
            name=pencil.name or base,
            field=pencil.field,
            E=sources["E"],
            Q=sources["Q"],
            L=sources["L"],
            metadata=metadata or {},
        )
        manifest = descriptor.save(out / f"{base}{MANIFEST_SUFFIX}")
        return descriptor, manifest

    def save(self, path: Path | str) -> Path:
        """Write the manifest as JSON."""
        file_path = Path(path)
        file_path.parent.mkdir(parents=True, exist_ok=True)
        with open(file_path, "w", encoding="utf-8") as f:
            json.dump(self.model_dump(exclude_none=True), f, indent=2, sort_keys=True)
            f.write("\n")
        logger.debug(f"wrote manifest {file_path}")
        return file_path


def load_manifest(path: Path | str) -> PencilDescriptor:
    """Parse and validate a manifest file.

    Raises:
        ParseError: For unreadable JSON (with its line) or a failed validation.
    """
    file_path = Path(path)
    try:
        with open(file_path, encoding="utf-8") as f:
            data: Any = json.load(f)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", file_path, e.lineno) from e
    except OSError as e:
        raise ParseError(f"cannot read manifest: {e}", file_path) from e
    try:
        return PencilDescriptor.model_validate(data)
    except ValidationError as e:
        problems = "; ".join(f"{'.'.join(map(str, err['loc']))}: {err['msg']}" for err in e.errors())
        raise ParseError(f"invalid manifest: {problems}", file_path) from e


def load_pencil(path: Path | str) -> StructuredPencil:
    """Load the pencil a manifest describes, resolving files relative to it."""
    file_path = Path(path)
    descriptor = load_manifest(file_path)
    pencil = descriptor.load(file_path.parent)
    if not pencil.name:
        pencil = StructuredPencil(
            E=pencil.E, Q=pencil.Q, L=pencil.L, name=file_path.stem, metadata=pencil.metadata
        )
    return pencil
