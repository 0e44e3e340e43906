"""Validated application configuration for dh-pencil."""

import logging
import math
import os
import sys
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field, ValidationError, field_validator

from ..linalg.tolerance import Tolerance


class ToleranceConfig(BaseModel):
    """Thresholds used by rank decisions and eigenvalue classification."""

    relative: float = Field(default=1e-10, ge=0)
    absolute: float = Field(default=1e-13, ge=0)
    cluster: float = Field(default=1e-7, ge=0)
    axis: float = Field(default=1e-8, ge=0)
    zero: float = Field(default=1e-8, ge=0)

    @field_validator("relative", "absolute", "cluster", "axis", "zero")
    @classmethod
    def validate_finite(cls, v: float) -> float:
        """Reject NaN and infinities."""
        if not math.isfinite(v):
            raise ValueError(f"tolerance must be finite, got {v}")
        return v

    def to_tolerance(self) -> Tolerance:
        return Tolerance(**self.model_dump())


class OutputConfig(BaseModel):
    """Report rendering."""

    format: str = Field(default="text")
    indent: int = Field(default=2, ge=0, le=8)

    @field_validator("format")
    @classmethod
    def validate_format(cls, v: str) -> str:
        """Validate output format."""
        valid_formats = {"text", "json"}
        if v.lower() not in valid_formats:
            raise ValueError(f"Invalid format: {v}. Must be one of {valid_formats}")
        return v.lower()


class BatchConfig(BaseModel):
    """Concurrent analysis of manifest directories."""

    max_workers: int = Field(default=4, ge=1, le=32)
    pattern: str = Field(default="*.json")


class GeneratorConfig(BaseModel):
    """Random and prescribed-structure generators."""

    default_seed: int = Field(default=0, ge=0)
    max_size: int = Field(default=200, ge=1)


class AppConfig(BaseModel):
    """Main application configuration."""

    version: str = Field(default="1.0.0")
    tolerance: ToleranceConfig = Field(default_factory=ToleranceConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)
    batch: BatchConfig = Field(default_factory=BatchConfig)
    generator: GeneratorConfig = Field(default_factory=GeneratorConfig)
    debug_mode: bool = False


def default_config_path() -> Path:
    """Per-user location of ``config.json``."""
    if sys.platform == "win32":
        base = Path(os.environ.get("APPDATA", Path.home() / "AppData" / "Roaming"))
    elif sys.platform == "darwin":
        base = Path.home() / "Library" / "Application Support"
    else:
        base = Path(os.environ.get("XDG_CONFIG_HOME", Path.home() / ".config"))
    return base / "DhPencil" / "config.json"


class ConfigValidator:
    """Reads, validates and persists :class:`AppConfig`.

    A configuration file that cannot be parsed or validated never stops the program: the
    problem is logged, the messages are kept for :meth:`get_validation_errors`, and the
    defaults are used.
    """

    def __init__(self, config_path: Path | None = None):
        self.logger = logging.getLogger(__name__)
        self.config_path = config_path or default_config_path()
        self.config: AppConfig | None = None
        self._validation_errors: list[str] = []

    def load_config(self) -> AppConfig:
        """Validate the file at :attr:`config_path`, or fall back to the defaults."""
        self._validation_errors = []
        try:
            raw = self.config_path.read_text(encoding="utf-8")
        except FileNotFoundError:
            self.logger.debug(f"No configuration at {self.config_path}, using defaults")
            self.config = AppConfig()
            return self.config
        except OSError as e:
            self.logger.error(f"Cannot read configuration {self.config_path}: {e}")
            self.config = AppConfig()
            return self.config

        try:
            self.config = self._checked(AppConfig.model_validate_json(raw))
            self.logger.info(f"Configuration loaded from {self.config_path}")
        except ValidationError as e:
            self._record(e)
            self.logger.error(f"Rejected configuration {self.config_path}, using defaults: {e}")
            self.config = AppConfig()
        return self.config

    def _record(self, error: ValidationError) -> None:
        self._validation_errors = [
            f"{'.'.join(str(part) for part in err['loc']) or '<root>'}: {err['msg']}"
            for err in error.errors()
        ]

    def _checked(self, config: AppConfig) -> AppConfig:
        if config.tolerance.cluster < config.tolerance.relative:
            self.logger.warning(
                "cluster tolerance is below the rank threshold; eigenvalue clusters may split"
            )
        return config

    def save_config(self) -> None:
        """Write the current configuration, if any."""
        if self.config is None:
            self.logger.error("No configuration to save")
            return
        try:
            self.config_path.parent.mkdir(parents=True, exist_ok=True)
            self.config_path.write_text(self.config.model_dump_json(indent=2) + "\n", encoding="utf-8")
        except OSError as e:
            self.logger.error(f"Cannot write configuration {self.config_path}: {e}")
            return
        self.logger.info(f"Configuration saved to {self.config_path}")

    def get_validation_errors(self) -> list[str]:
        """Messages from the last rejected file or update, as ``location: message``."""
        return list(self._validation_errors)

    def update_setting(self, path: str, value: Any) -> bool:
        """Set one value addressed by a dotted path such as ``batch.max_workers``.

        The change is validated together with the rest of the configuration and saved
        only when it passes. Unknown paths are rejected.
        """
        if self.config is None:
            return False

        data = self.config.model_dump()
        *sections, key = path.split(".")
        node = data
        for section in sections:
            child = node.get(section)
            if not isinstance(child, dict):
                self.logger.error(f"Unknown setting: {path}")
                return False
            node = child
        if key not in node:
            self.logger.error(f"Unknown setting: {path}")
            return False
        node[key] = value

        try:
            updated = self._checked(AppConfig.model_validate(data))
        except ValidationError as e:
            self._record(e)
            self.logger.error(f"Rejected {path} = {value!r}: {e}")
            return False
        self.config = updated
        self.save_config()
        self.logger.info(f"Updated setting {path} = {value!r}")
        return True
