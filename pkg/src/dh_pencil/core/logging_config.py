"""Process-wide logging for dh-pencil.

Reports go to stdout, so the console handler always writes to stderr. Outside the test
environment a rotating run log and a rotating error log are kept in the per-user log
directory.
"""

import logging
import logging.handlers
import os
import sys
from enum import Enum
from pathlib import Path

import numpy as np
import scipy

MEGABYTE = 1024 * 1024

SHORT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
TRACE_FORMAT = (
    "%(asctime)s - %(name)s - %(levelname)s - [%(filename)s:%(lineno)d] - "
    "%(funcName)s() - %(message)s"
)


class Environment(Enum):
    """Runtime environment modes."""

    DEVELOPMENT = "development"
    PRODUCTION = "production"
    TEST = "test"
    DEBUG = "debug"


# environment -> (root level, console level, console format)
_LEVELS: dict[Environment, tuple[int, int, str]] = {
    Environment.DEBUG: (logging.DEBUG, logging.DEBUG, TRACE_FORMAT),
    Environment.DEVELOPMENT: (logging.DEBUG, logging.WARNING, TRACE_FORMAT),
    Environment.PRODUCTION: (logging.INFO, logging.WARNING, SHORT_FORMAT),
    Environment.TEST: (logging.WARNING, logging.ERROR, SHORT_FORMAT),
}

_QUIET_LIBRARIES = ("numpy", "scipy", "matplotlib")


def detect_environment() -> Environment:
    """Read the environment from ``DH_PENCIL_ENV`` and ``DH_PENCIL_DEBUG``.

    A running pytest session always counts as the test environment.
    """
    name = os.environ.get("DH_PENCIL_ENV", "").strip().lower()
    if name == "test" or "pytest" in sys.modules:
        return Environment.TEST
    if name == "debug" or os.environ.get("DH_PENCIL_DEBUG", "").lower() in ("1", "true"):
        return Environment.DEBUG
    try:
        return Environment(name)
    except ValueError:
        return Environment.DEVELOPMENT


def default_log_dir() -> Path:
    """Per-user log directory."""
    if sys.platform == "win32":
        base = Path(os.environ.get("LOCALAPPDATA", Path.home() / "AppData" / "Local"))
    elif sys.platform == "darwin":
        base = Path.home() / "Library" / "Logs"
    else:
        base = Path(os.environ.get("XDG_STATE_HOME", Path.home() / ".local" / "share"))
    return base / "DhPencil" / "logs"


def _rotating_handler(path: Path, megabytes: int, backups: int, level: int) -> logging.Handler:
    handler = logging.handlers.RotatingFileHandler(
        path, maxBytes=megabytes * MEGABYTE, backupCount=backups, encoding="utf-8"
    )
    handler.setFormatter(logging.Formatter(TRACE_FORMAT))
    handler.setLevel(level)
    return handler


class LoggingConfig:
    """Handlers and levels for one process.

    Args:
        log_dir: Directory for the rotating logs. Defaults to :func:`default_log_dir`.
        log_to_file: Attach the rotating logs. Always off in the test environment.
    """

    def __init__(self, log_dir: Path | None = None, log_to_file: bool = True):
        self.environment = detect_environment()
        self.log_to_file = log_to_file and self.environment is not Environment.TEST
        self.log_dir = log_dir or default_log_dir()
        if self.log_to_file:
            self.log_dir.mkdir(parents=True, exist_ok=True)
        self._console: logging.Handler | None = None

    def setup_logging(self) -> None:
        """Replace the root handlers according to the environment."""
        root_level, console_level, console_format = _LEVELS[self.environment]
        root = logging.getLogger()
        for handler in list(root.handlers):
            root.removeHandler(handler)
        root.setLevel(root_level)

        self._console = logging.StreamHandler(sys.stderr)
        self._console.setFormatter(logging.Formatter(console_format))
        self._console.setLevel(console_level)
        root.addHandler(self._console)

        if self.log_to_file:
            root.addHandler(_rotating_handler(self.log_dir / "dh_pencil.log", 10, 5, logging.DEBUG))
            root.addHandler(_rotating_handler(self.log_dir / "errors.log", 5, 3, logging.ERROR))

        for name in _QUIET_LIBRARIES:
            logging.getLogger(name).setLevel(logging.WARNING)

        logger = logging.getLogger(__name__)
        logger.info(f"Logging configured for environment: {self.environment.value}")
        if self.log_to_file:
            logger.info(f"Log directory: {self.log_dir}")
        logger.debug(f"numpy {np.__version__}, scipy {scipy.__version__}, Python {sys.version.split()[0]}")

    def set_console_level(self, level: int) -> None:
        """Lower the console threshold, e.g. for ``--verbose``."""
        if self._console is None:
            return
        self._console.setLevel(level)
        root = logging.getLogger()
        if root.level > level:
            root.setLevel(level)


_config: LoggingConfig | None = None


def setup_logging(log_dir: Path | None = None, log_to_file: bool = True) -> LoggingConfig:
    """Configure logging once per process and return the active configuration."""
    global _config
    if _config is None:
        _config = LoggingConfig(log_dir, log_to_file=log_to_file)
        _config.setup_logging()
    return _config


def get_logger(name: str) -> logging.Logger:
    """Get a logger, configuring logging on first use."""
    if _config is None:
        setup_logging()
    return logging.getLogger(name)


def get_environment() -> Environment:
    """Get the current environment."""
    return setup_logging().environment
