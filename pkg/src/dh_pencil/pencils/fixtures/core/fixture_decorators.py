"""Fixture registration decorator."""

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .base_fixture import BaseFixture

# Global registry for discovered fixtures
_discovered_fixtures: dict[str, type["BaseFixture"]] = {}


def register_fixture(cls: type["BaseFixture"]) -> type["BaseFixture"]:
    """
    Decorator to register a fixture class under its fixture ID.

    Usage:
        @register_fixture
        class MyFixture(BaseFixture):
            ...
    """
    fixture_id = cls().fixture_id

    if fixture_id in _discovered_fixtures and _discovered_fixtures[fixture_id] is not cls:
        raise ValueError(f"Fixture '{fixture_id}' is already registered")

    _discovered_fixtures[fixture_id] = cls
    return cls


def get_discovered_fixtures() -> dict[str, type["BaseFixture"]]:
    """Get all fixtures registered through ``@register_fixture``."""
    return _discovered_fixtures.copy()
