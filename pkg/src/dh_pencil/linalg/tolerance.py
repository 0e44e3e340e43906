"""Tolerance settings shared by every numerical decision."""

import math
import os
from dataclasses import asdict, dataclass, replace
from typing import Any

from ..core.errors import ConfigurationError, InvalidTolerance

TOLERANCE_ENV_VAR = "DH_PENCIL_TOL"


@dataclass(frozen=True)
class Tolerance:
    """Thresholds for rank decisions and eigenvalue classification.

    Attributes:
        relative: Relative rank threshold, scaled by dimension and norm.
        absolute: Absolute floor added to every threshold.
        cluster: Distance (relative to the pencil scale) under which eigenvalues merge.
        axis: Relative distance from the imaginary axis still counted as on the axis.
        zero: Relative modulus under which an eigenvalue counts as zero.
    """

    relative: float = 1e-10
    absolute: float = 1e-13
    cluster: float = 1e-7
    axis: float = 1e-8
    zero: float = 1e-8

    def __post_init__(self) -> None:
        for name, value in asdict(self).items():
            if not isinstance(value, (int, float)) or not math.isfinite(value) or value < 0:
                raise InvalidTolerance(f"tolerance '{name}' must be finite and >= 0, got {value}")

    def threshold(self, scale: float, dim: int = 1) -> float:
        """Rank threshold ``dim * relative * scale + absolute``."""
        return max(dim, 1) * self.relative * scale + self.absolute

    def with_relative(self, relative: float) -> "Tolerance":
        """Return a copy with a different relative threshold."""
        return replace(self, relative=relative)

    def to_dict(self) -> dict[str, float]:
        """Convert to a plain dictionary."""
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Tolerance":
        """Create a tolerance from a dictionary, ignoring unknown keys."""
        fields = {k: float(v) for k, v in data.items() if k in cls.__dataclass_fields__}
        return cls(**fields)

    @classmethod
    def from_env(cls, base: "Tolerance | None" = None) -> "Tolerance":
        """Apply the ``DH_PENCIL_TOL`` override to ``base`` (defaults when omitted).

        Raises:
            ConfigurationError: If the variable is set but not a valid float.
        """
        tol = base or cls()
        raw = os.environ.get(TOLERANCE_ENV_VAR, "").strip()
        if not raw:
            return tol
        try:
            value = float(raw)
        except ValueError as e:
            raise ConfigurationError(f"{TOLERANCE_ENV_VAR}={raw!r} is not a number") from e
        try:
            return tol.with_relative(value)
        except InvalidTolerance as e:
            raise ConfigurationError(f"{TOLERANCE_ENV_VAR}: {e}") from e


DEFAULT_TOLERANCE = Tolerance()
