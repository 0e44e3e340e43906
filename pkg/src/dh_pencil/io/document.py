"""Analysis documents: the JSON record of everything computed for one pencil."""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .. import __version__
from ..core.errors import ParseError
from ..kronecker.structure import KroneckerStructure
from ..linalg.tolerance import Tolerance
from ..pencils.structure_check import StructureReport

logger = logging.getLogger(__name__)


def json_default(value: Any) -> Any:
    """Encode numpy scalars for ``json.dumps``."""
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


@dataclass
class AnalysisDocument:
    """Structure report, Kronecker data and the optional analyses of one pencil.

    ``stability``, ``condensed`` and ``perturbation`` hold the ``to_dict`` output of the
    corresponding reports. Floats are written by ``json`` with the shortest repr, so a
    save/load cycle reproduces every number exactly.
    """

    name: str
    tolerance: Tolerance
    structure: StructureReport
    kronecker: KroneckerStructure
    stability: dict[str, Any] | None = None
    condensed: dict[str, Any] | None = None
    perturbation: dict[str, Any] | None = None
    extras: dict[str, Any] = field(default_factory=dict)
    version: str = __version__

    def to_dict(self) -> dict[str, Any]:
        return {
            "version": self.version,
            "name": self.name,
            "tolerance": self.tolerance.to_dict(),
            "structure": self.structure.to_dict(),
            "kronecker": self.kronecker.to_dict(),
            "stability": self.stability,
            "condensed": self.condensed,
            "perturbation": self.perturbation,
            "extras": self.extras,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "AnalysisDocument":
        """Rebuild a document.

        Raises:
            ParseError: If a required section is missing or malformed.
        """
        try:
            return cls(
                name=str(data.get("name", "")),
                tolerance=Tolerance.from_dict(data["tolerance"]),
                structure=StructureReport.from_dict(data["structure"]),
                kronecker=KroneckerStructure.from_dict(data["kronecker"]),
                stability=data.get("stability"),
                condensed=data.get("condensed"),
                perturbation=data.get("perturbation"),
                extras=dict(data.get("extras") or {}),
                version=str(data.get("version", __version__)),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"malformed analysis document: {e!r}") from e

    def to_json(self, indent: int = 2) -> str:
        """Deterministic JSON text (sorted keys)."""
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True, default=json_default)

    @classmethod
    def from_json(cls, text: str) -> "AnalysisDocument":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", line=e.lineno) from e
        return cls.from_dict(data)

    def save(self, path: Path | str, indent: int = 2) -> Path:
        file_path = Path(path)
        file_path.parent.mkdir(parents=True, exist_ok=True)
        file_path.write_text(self.to_json(indent) + "\n", encoding="utf-8")
        logger.debug(f"wrote analysis document {file_path}")
        return file_path

    @classmethod
    def load(cls, path: Path | str) -> "AnalysisDocument":
        file_path = Path(path)
        try:
            text = file_path.read_text(encoding="utf-8")
        except OSError as e:
            raise ParseError(f"cannot read document: {e}", file_path) from e
        return cls.from_json(text)
