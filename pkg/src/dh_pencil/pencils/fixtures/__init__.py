"""Named pencil families from descriptor modelling and worked examples."""

from typing import Any

from ..structured_pencil import StructuredPencil
from .core import BaseFixture, get_registry


def fixture(name: str, **params: Any) -> StructuredPencil:
    """Build the named fixture with the given parameters (defaults for the rest).

    Raises:
        UnknownFixture: If ``name`` is not registered.
        InvalidParams: If a parameter is unknown or invalid for the family.
    """
    return get_registry().create(name, **params)


def list_fixtures() -> list[BaseFixture]:
    """All registered fixtures, sorted by ID."""
    return get_registry().get_all_fixtures()


__all__ = ["fixture", "list_fixtures"]
