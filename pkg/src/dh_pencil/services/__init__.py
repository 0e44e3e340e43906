"""Service layer: the operations behind every command, independent of the CLI."""

from .analysis_service import AnalysisService, BatchItem, CheckOutcome
from .generator_service import GeneratorService, parse_param
from .service_container import ServiceContainer
from .settings_service import SettingsService

__all__ = [
    "AnalysisService",
    "BatchItem",
    "CheckOutcome",
    "GeneratorService",
    "ServiceContainer",
    "SettingsService",
    "parse_param",
]
