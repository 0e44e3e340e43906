"""Base fixture class for named pencil families."""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from ....core.errors import InvalidInput, InvalidParams
from ....linalg.kernels import Matrix, as_matrix, is_psd, min_eigenvalue
from ....linalg.tolerance import DEFAULT_TOLERANCE
from ...structured_pencil import StructuredPencil


class ParameterType(Enum):
    """Kinds of fixture parameters."""

    INTEGER = "integer"
    SCALAR = "scalar"
    MATRIX = "matrix"


class MatrixConstraint(Enum):
    """Definiteness required of a matrix parameter."""

    NONE = "none"
    PSD = "psd"
    PD = "pd"


@dataclass
class FixtureParameter:
    """Defines a single fixture parameter."""

    key: str
    description: str
    parameter_type: ParameterType
    default_value: Any
    min_value: int | float | None = None
    exclusive_min: bool = False
    constraint: MatrixConstraint = MatrixConstraint.NONE


@dataclass
class ExpectedStructure:
    """Structural flags a family is documented to satisfy (``None`` = not stated)."""

    b1a: bool | None = None
    b1b: bool | None = None
    b1c: bool | None = None
    r_psd: bool | None = None
    dissipative: bool | None = None
    notes: dict[str, Any] = field(default_factory=dict)

    def stated(self) -> dict[str, bool]:
        """Only the flags with a documented value."""
        flags = {
            "b1a": self.b1a,
            "b1b": self.b1b,
            "b1c": self.b1c,
            "r_psd": self.r_psd,
            "dissipative": self.dissipative,
        }
        return {key: value for key, value in flags.items() if value is not None}


class BaseFixture(ABC):
    """Base class for all pencil fixtures."""

    def __init__(self) -> None:
        """Initialize the fixture."""
        self._fixture_id = self.get_fixture_id()
        self._description = self.get_description()
        self._parameters = {p.key: p for p in self.get_parameters()}

    @property
    def fixture_id(self) -> str:
        """Unique fixture identifier."""
        return self._fixture_id

    @property
    def description(self) -> str:
        """One-line description."""
        return self._description

    @property
    def parameters(self) -> dict[str, FixtureParameter]:
        """Declared parameters keyed by name."""
        return dict(self._parameters)

    @abstractmethod
    def get_fixture_id(self) -> str:
        """Get the unique identifier."""

    @abstractmethod
    def get_description(self) -> str:
        """Get the description shown by ``list_fixtures``."""

    def get_parameters(self) -> list[FixtureParameter]:
        """Get the parameter definitions (none by default)."""
        return []

    def get_expected_structure(self) -> ExpectedStructure:
        """Structural flags documented for this family."""
        return ExpectedStructure()

    @abstractmethod
    def build(self, params: dict[str, Any]) -> StructuredPencil:
        """Assemble the pencil from validated parameters."""

    def create(self, **params: Any) -> StructuredPencil:
        """Validate parameters, fill defaults and build the pencil.

        Raises:
            InvalidParams: For unknown keys or values violating a declared constraint.
        """
        unknown = set(params) - set(self._parameters)
        if unknown:
            raise InvalidParams(
                f"fixture '{self.fixture_id}' has no parameter(s) {', '.join(sorted(unknown))}"
            )
        values: dict[str, Any] = {}
        for key, definition in self._parameters.items():
            raw = params.get(key, definition.default_value)
            values[key] = self._validate_value(definition, raw)
        pencil = self.build(values)
        return StructuredPencil(
            E=pencil.E,
            Q=pencil.Q,
            L=pencil.L,
            name=self.fixture_id,
            metadata={"fixture": self.fixture_id},
        )

    def _validate_value(self, definition: FixtureParameter, raw: Any) -> Any:
        key = definition.key
        if definition.parameter_type is ParameterType.INTEGER:
            if isinstance(raw, bool) or not isinstance(raw, (int, np.integer)):
                try:
                    value = int(str(raw))
                except ValueError as e:
                    raise InvalidParams(f"'{key}' must be an integer, got {raw!r}") from e
            else:
                value = int(raw)
            self._check_min(definition, value)
            return value
        if definition.parameter_type is ParameterType.SCALAR:
            try:
                value_f = float(raw)
            except (TypeError, ValueError) as e:
                raise InvalidParams(f"'{key}' must be a number, got {raw!r}") from e
            if not math.isfinite(value_f):
                raise InvalidParams(f"'{key}' must be finite")
            self._check_min(definition, value_f)
            return value_f
        try:
            matrix = as_matrix(np.atleast_2d(np.asarray(raw)), key)
        except InvalidInput as e:
            raise InvalidParams(str(e)) from e
        self._check_constraint(definition, matrix)
        return matrix

    def _check_min(self, definition: FixtureParameter, value: float) -> None:
        bound = definition.min_value
        if bound is None:
            return
        if value < bound or (definition.exclusive_min and value == bound):
            relation = ">" if definition.exclusive_min else ">="
            raise InvalidParams(f"'{definition.key}' must be {relation} {bound}, got {value}")

    def _check_constraint(self, definition: FixtureParameter, matrix: Matrix) -> None:
        constraint = definition.constraint
        if constraint is MatrixConstraint.NONE:
            return
        if matrix.shape[0] != matrix.shape[1] or not is_psd(matrix, DEFAULT_TOLERANCE):
            raise InvalidParams(f"'{definition.key}' must be Hermitian positive semidefinite")
        if constraint is MatrixConstraint.PD and matrix.size and min_eigenvalue(matrix) <= 0:
            raise InvalidParams(f"'{definition.key}' must be positive definite")


def matrix_parameter(
    key: str,
    description: str,
    default: Any,
    constraint: MatrixConstraint = MatrixConstraint.NONE,
) -> FixtureParameter:
    """Shorthand for a matrix-valued parameter."""
    return FixtureParameter(key, description, ParameterType.MATRIX, default, constraint=constraint)


def require_shape(name: str, matrix: Matrix, rows: int, cols: int) -> None:
    """Raise ``InvalidParams`` unless ``matrix`` is ``rows x cols``."""
    if matrix.shape != (rows, cols):
        raise InvalidParams(f"'{name}' must be {rows} x {cols}, got {matrix.shape}")
