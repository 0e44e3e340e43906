"""User-level defaults for the dh-pencil command line."""

import json
import logging
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

from ..linalg.tolerance import Tolerance


@dataclass
class Settings:
    """Defaults applied when the command line leaves an option unset."""

    tolerance: dict[str, float] = field(default_factory=lambda: Tolerance().to_dict())
    output_format: str = "text"  # text, json
    default_seed: int = 0
    batch_workers: int = 4
    log_to_file: bool = True

    def to_dict(self) -> dict[str, Any]:
        """Convert settings to dictionary."""
        data = asdict(self)
        data["tolerance"] = dict(self.tolerance)
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Settings":
        """Create settings from dictionary; unknown keys are ignored."""
        defaults = cls()
        known = {f.name for f in fields(cls)}
        values = {k: v for k, v in data.items() if k in known}
        tolerance = dict(defaults.tolerance)
        tolerance.update(values.pop("tolerance", None) or {})
        return cls(tolerance=tolerance, **values)

    def tolerance_object(self) -> Tolerance:
        """The stored thresholds as a ``Tolerance``."""
        return Tolerance.from_dict(self.tolerance)

    def save(self, file_path: Path) -> None:
        """Write the settings as JSON, replacing the file atomically."""
        file_path.parent.mkdir(parents=True, exist_ok=True)
        partial = file_path.with_suffix(file_path.suffix + ".tmp")
        partial.write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")
        partial.replace(file_path)

    @classmethod
    def load(cls, file_path: Path) -> "Settings":
        """Read settings, using the defaults for a missing or unreadable file."""
        try:
            data = json.loads(file_path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            return cls()
        except (json.JSONDecodeError, OSError) as e:
            logging.getLogger(__name__).error(f"Ignoring unreadable settings {file_path}: {e}")
            return cls()
        if not isinstance(data, dict):
            logging.getLogger(__name__).error(f"Ignoring settings {file_path}: expected a JSON object")
            return cls()
        try:
            return cls.from_dict(data)
        except TypeError as e:
            logging.getLogger(__name__).error(f"Ignoring settings {file_path}: {e}")
            return cls()


class SettingsManager:
    """Loads, updates and persists ``Settings``."""

    def __init__(self, settings_path: Path) -> None:
        self.logger = logging.getLogger(__name__)
        self._settings_path = settings_path
        self._settings = Settings.load(settings_path)

    @property
    def settings_path(self) -> Path:
        return self._settings_path

    def get_settings(self) -> Settings:
        """Get current settings."""
        return self._settings

    def save(self) -> None:
        """Save current settings to file."""
        self._settings.save(self._settings_path)

    def update_settings(self, **kwargs: Any) -> None:
        """Update known settings and persist them."""
        for key, value in kwargs.items():
            if hasattr(self._settings, key):
                setattr(self._settings, key, value)
            else:
                self.logger.warning(f"Unknown setting ignored: {key}")
        self.save()


_global_settings: Settings | None = None


def get_settings() -> Settings:
    """Get the global settings instance."""
    global _global_settings
    if _global_settings is None:
        _global_settings = Settings()
    return _global_settings


def set_settings(settings: Settings) -> None:
    """Set the global settings instance."""
    global _global_settings
    _global_settings = settings
