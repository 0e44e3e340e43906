"""Stability analyses of dissipative Hamiltonian pencils and damped quadratics."""

from .dh_analysis import analyze_dh_pencil, spectral_scale
from .lyapunov import lyapunov_check
from .quadratic import analyze_quadratic
from .report import (
    GuaranteeStatus,
    ImaginaryEigenvalueCheck,
    LyapunovReport,
    QuadraticReport,
    StabilityReport,
)

__all__ = [
    "GuaranteeStatus",
    "ImaginaryEigenvalueCheck",
    "LyapunovReport",
    "QuadraticReport",
    "StabilityReport",
    "analyze_dh_pencil",
    "analyze_quadratic",
    "lyapunov_check",
    "spectral_scale",
]
