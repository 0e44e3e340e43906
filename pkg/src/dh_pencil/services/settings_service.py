"""Settings service - resolves the effective options of one command."""

import logging
from typing import Any

from ..core.config_validator import AppConfig
from ..core.errors import ConfigurationError, InvalidTolerance
from ..core.settings import Settings, SettingsManager
from ..linalg.tolerance import Tolerance


class SettingsService:
    """Merges command-line options, the environment, user settings and validated config.

    Tolerance precedence: explicit ``--tol`` > ``DH_PENCIL_TOL`` > settings file >
    built-in defaults.
    """

    def __init__(self, settings_manager: SettingsManager | None, config: AppConfig) -> None:
        self.logger = logging.getLogger(__name__)
        self._settings_manager = settings_manager
        self._config = config

    @property
    def settings(self) -> Settings:
        if self._settings_manager is None:
            return Settings()
        return self._settings_manager.get_settings()

    @property
    def config(self) -> AppConfig:
        return self._config

    def tolerance(self, relative: float | None = None) -> Tolerance:
        """Effective tolerance.

        Raises:
            ConfigurationError: If the settings file or ``DH_PENCIL_TOL`` holds invalid values.
            InvalidTolerance: If ``relative`` is negative or not finite.
        """
        try:
            base = self.settings.tolerance_object()
        except (InvalidTolerance, TypeError, ValueError) as e:
            raise ConfigurationError(f"invalid tolerance in settings: {e}") from e
        tol = Tolerance.from_env(base)
        if relative is not None:
            tol = tol.with_relative(relative)
        self.logger.debug(f"Effective tolerance: {tol}")
        return tol

    def output_format(self, requested: str | None = None) -> str:
        return (requested or self.settings.output_format or self._config.output.format).lower()

    def seed(self, requested: int | None = None) -> int:
        if requested is not None:
            return requested
        return self.settings.default_seed or self._config.generator.default_seed

    @property
    def batch_workers(self) -> int:
        """Workers for batch runs, capped by the validated configuration."""
        return max(1, min(self.settings.batch_workers, self._config.batch.max_workers))

    @property
    def batch_pattern(self) -> str:
        return self._config.batch.pattern

    @property
    def indent(self) -> int:
        return self._config.output.indent

    @property
    def max_size(self) -> int:
        return self._config.generator.max_size

    def update(self, **kwargs: Any) -> bool:
        """Persist new user settings."""
        if self._settings_manager is None:
            self.logger.warning("No settings file configured, update ignored")
            return False
        try:
            self._settings_manager.update_settings(**kwargs)
            return True
        except OSError as e:
            self.logger.error(f"Error saving settings: {e}")
            return False
