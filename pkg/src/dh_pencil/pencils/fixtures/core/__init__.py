"""Core fixture infrastructure: base class, decorator and registry."""

from .base_fixture import (
    BaseFixture,
    ExpectedStructure,
    FixtureParameter,
    MatrixConstraint,
    ParameterType,
    matrix_parameter,
    require_shape,
)
from .fixture_decorators import get_discovered_fixtures, register_fixture
from .fixture_registry import FixtureRegistry, get_registry

__all__ = [
    "BaseFixture",
    "ExpectedStructure",
    "FixtureParameter",
    "FixtureRegistry",
    "MatrixConstraint",
    "ParameterType",
    "get_discovered_fixtures",
    "get_registry",
    "matrix_parameter",
    "register_fixture",
    "require_shape",
]
