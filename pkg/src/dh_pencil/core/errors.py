"""Exception hierarchy for dh-pencil."""

from pathlib import Path


class DhPencilError(Exception):
    """Base class for every error raised by dh-pencil."""


class InvalidInput(DhPencilError, ValueError):
    """Raised when a matrix argument is malformed (non-finite, wrong rank, ...)."""


class NonSquare(InvalidInput):
    """Raised when a square matrix is required."""


class ShapeMismatch(InvalidInput):
    """Raised when matrix dimensions do not fit together."""


class NotHermitian(InvalidInput):
    """Raised when a Hermitian matrix is required."""


class NotPsd(InvalidInput):
    """Raised when a positive semidefinite matrix is required."""


class ColumnsNotOrthonormal(InvalidInput):
    """Raised when a stacked matrix must have orthonormal columns."""


class InvalidTolerance(InvalidInput):
    """Raised for negative or non-finite tolerance values."""


class UnknownFixture(DhPencilError, KeyError):
    """Raised when a fixture name is not registered."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown fixture"


class InvalidParams(InvalidInput):
    """Raised when fixture or generator parameters are invalid."""


class StructureViolated(DhPencilError):
    """Raised when a structural hypothesis such as E*Q = Q*E fails."""


class SingularPencil(DhPencilError):
    """Raised when an operation needs a regular pencil."""


class NotAnEigenvalue(DhPencilError):
    """Raised when a requested point is not an eigenvalue of the pencil."""


class InfeasibleDimensions(DhPencilError):
    """Raised when requested block sizes cannot be realized."""


class BothNonnegInfeasible(DhPencilError):
    """Raised when both diagonal factors cannot be made nonnegative."""


class IndexTooHigh(DhPencilError):
    """Raised when a pencil of index two or more reaches an index-one pipeline."""

    def __init__(self, index: int) -> None:
        super().__init__(f"pencil has index {index}, at most 1 is supported")
        self.index = index


class RangeConditionViolated(DhPencilError):
    """Raised when im Y* is not contained in the required range."""


class SymmetricModeInfeasible(DhPencilError):
    """Raised when no purely symmetric stabilizing perturbation exists."""


class ParseError(DhPencilError):
    """Raised for malformed input files, carrying the offending line number."""

    def __init__(self, message: str, path: Path | str | None = None, line: int | None = None):
        self.path = Path(path) if path is not None else None
        self.line = line
        location = ""
        if self.path is not None:
            location = f"{self.path}"
            if line is not None:
                location += f":{line}"
            location += ": "
        elif line is not None:
            location = f"line {line}: "
        super().__init__(f"{location}{message}")


class SymmetryViolation(DhPencilError):
    """Raised when stored entries contradict the declared symmetry class."""


class ConfigurationError(DhPencilError):
    """Raised when configuration is invalid."""
