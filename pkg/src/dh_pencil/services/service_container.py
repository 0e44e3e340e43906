"""Service container for dependency injection and service management."""

from typing import Any

from ..core.config_validator import AppConfig
from ..core.settings import SettingsManager
from ..linalg.tolerance import Tolerance
from .analysis_service import AnalysisService
from .generator_service import GeneratorService
from .settings_service import SettingsService


class ServiceContainer:
    """Container for managing services with lazy construction."""

    def __init__(
        self,
        settings_manager: SettingsManager | None = None,
        config: AppConfig | None = None,
        tolerance: float | None = None,
    ) -> None:
        """Initialize the service container.

        Args:
            settings_manager: User settings; built-in defaults when omitted.
            config: Validated application configuration.
            tolerance: Relative tolerance given on the command line, if any.
        """
        self._settings_manager = settings_manager
        self._config = config or AppConfig()
        self._relative_tolerance = tolerance

        self._settings_service: SettingsService | None = None
        self._analysis_service: AnalysisService | None = None
        self._generator_service: GeneratorService | None = None

    @property
    def settings_service(self) -> SettingsService:
        """Get the settings service."""
        if self._settings_service is None:
            self._settings_service = SettingsService(self._settings_manager, self._config)
        return self._settings_service

    @property
    def tolerance(self) -> Tolerance:
        return self.settings_service.tolerance(self._relative_tolerance)

    @property
    def analysis_service(self) -> AnalysisService:
        """Get the analysis service."""
        if self._analysis_service is None:
            self._analysis_service = AnalysisService(
                self.tolerance, max_workers=self.settings_service.batch_workers
            )
        return self._analysis_service

    @property
    def generator_service(self) -> GeneratorService:
        """Get the generator service."""
        if self._generator_service is None:
            self._generator_service = GeneratorService(self.settings_service.max_size)
        return self._generator_service

    def get_all_services(self) -> dict[str, Any]:
        """Get all services for debugging/inspection."""
        return {
            "settings_service": self.settings_service,
            "analysis_service": self.analysis_service,
            "generator_service": self.generator_service,
        }
