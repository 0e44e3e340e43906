"""Structured pencils, structural checks and fixtures."""

from .fixtures import fixture, list_fixtures
from .structure_check import CheckResult, StructureReport, check_structure
from .structured_pencil import StructuredPencil, split_dissipative

__all__ = [
    "CheckResult",
    "StructureReport",
    "StructuredPencil",
    "check_structure",
    "fixture",
    "list_fixtures",
    "split_dissipative",
]
