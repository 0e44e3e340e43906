"""Fixture registry with auto-discovery of fixture modules."""

import importlib
import logging
import pkgutil
from pathlib import Path
from typing import Any

from ....core.errors import UnknownFixture
from ...structured_pencil import StructuredPencil
from .base_fixture import BaseFixture
from .fixture_decorators import get_discovered_fixtures


class FixtureRegistry:
    """Registry for all named pencil families."""

    def __init__(self) -> None:
        """Initialize the registry and discover fixture modules."""
        self.logger = logging.getLogger(__name__)
        self._fixtures: dict[str, BaseFixture] = {}
        self._initialize_fixtures()

    def _initialize_fixtures(self) -> None:
        self._auto_discover_fixtures()

        for fixture_id, fixture_class in get_discovered_fixtures().items():
            try:
                self._fixtures[fixture_id] = fixture_class()
            except Exception as e:
                self.logger.warning(f"Failed to initialize fixture '{fixture_id}': {e}")

        if not self._fixtures:
            raise RuntimeError(
                "No fixtures were discovered. Ensure fixture modules use @register_fixture."
            )
        self.logger.debug(f"Discovered {len(self._fixtures)} fixtures")

    def _auto_discover_fixtures(self) -> None:
        """Import every module of the fixtures package to trigger registration."""
        fixtures_dir = Path(__file__).parent.parent
        parent_package = ".".join(__package__.split(".")[:-1])

        for module_info in pkgutil.iter_modules([str(fixtures_dir)]):
            if module_info.name in ("core", "__init__"):
                continue
            try:
                importlib.import_module(f".{module_info.name}", package=parent_package)
            except ImportError as e:
                self.logger.warning(f"Failed to import fixture module {module_info.name}: {e}")

    def get_fixture(self, fixture_id: str) -> BaseFixture:
        """Get a fixture by ID.

        Raises:
            UnknownFixture: If no fixture has this ID.
        """
        try:
            return self._fixtures[fixture_id]
        except KeyError:
            known = ", ".join(sorted(self._fixtures))
            raise UnknownFixture(f"unknown fixture '{fixture_id}' (known: {known})") from None

    def get_all_fixtures(self) -> list[BaseFixture]:
        """Get all fixtures sorted by ID."""
        return [self._fixtures[key] for key in sorted(self._fixtures)]

    def get_fixture_ids(self) -> list[str]:
        return sorted(self._fixtures)

    def create(self, fixture_id: str, **params: Any) -> StructuredPencil:
        """Build the named fixture."""
        return self.get_fixture(fixture_id).create(**params)


_registry: FixtureRegistry | None = None


def get_registry() -> FixtureRegistry:
    """Get the process-wide fixture registry."""
    global _registry
    if _registry is None:
        _registry = FixtureRegistry()
    return _registry
