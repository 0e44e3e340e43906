"""Structural hypothesis checks with chain architecture."""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any

from ..linalg.kernels import adjoint, hermitian_part, max_eigenvalue, min_eigenvalue, norm2
from ..linalg.tolerance import DEFAULT_TOLERANCE, Tolerance
from .structured_pencil import StructuredPencil

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one structural check.

    ``value`` is a residual norm for identity checks and an extreme eigenvalue for
    semidefiniteness checks; ``threshold`` is the bound it was compared against.
    """

    passed: bool
    value: float
    threshold: float

    def to_dict(self) -> dict[str, Any]:
        return {"passed": self.passed, "value": self.value, "threshold": self.threshold}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "CheckResult":
        return cls(bool(data["passed"]), float(data["value"]), float(data["threshold"]))


class StructureCheck(ABC):
    """Abstract base class for a structural check on a pencil."""

    key: str = ""

    @abstractmethod
    def evaluate(self, pencil: StructuredPencil, tol: Tolerance) -> CheckResult:
        """Evaluate the check.

        Args:
            pencil: Pencil to inspect.
            tol: Tolerance settings.

        Returns:
            The check result with its residual and threshold.
        """

    @abstractmethod
    def get_error_message(self) -> str:
        """Describe the failed condition."""


class HermitianProductCheck(StructureCheck):
    """``E*Q = Q*E``."""

    key = "b1a"

    def evaluate(self, pencil: StructuredPencil, tol: Tolerance) -> CheckResult:
        e, q = pencil.E, pencil.Q
        prod = adjoint(e) @ q
        residual = norm2(prod - adjoint(prod))
        threshold = tol.threshold(norm2(e) * norm2(q), max(pencil.shape))
        return CheckResult(residual <= threshold, residual, threshold)

    def get_error_message(self) -> str:
        return "E*Q is not Hermitian"


class HermitianCoproductCheck(StructureCheck):
    """``E Q* = Q E*``."""

    key = "b1b"

    def evaluate(self, pencil: StructuredPencil, tol: Tolerance) -> CheckResult:
        e, q = pencil.E, pencil.Q
        prod = e @ adjoint(q)
        residual = norm2(prod - adjoint(prod))
        threshold = tol.threshold(norm2(e) * norm2(q), max(pencil.shape))
        return CheckResult(residual <= threshold, residual, threshold)

    def get_error_message(self) -> str:
        return "EQ* is not Hermitian"


class HamiltonianPsdCheck(StructureCheck):
    """``E*Q >= 0``; requires the Hermitian check to pass as well."""

    key = "b1c"

    def __init__(self, hermitian_check: HermitianProductCheck | None = None) -> None:
        self._hermitian_check = hermitian_check or HermitianProductCheck()

    def evaluate(self, pencil: StructuredPencil, tol: Tolerance) -> CheckResult:
        prod = adjoint(pencil.E) @ pencil.Q
        value = min_eigenvalue(hermitian_part(prod), tol)
        threshold = tol.threshold(norm2(prod), prod.shape[0])
        hermitian = self._hermitian_check.evaluate(pencil, tol).passed
        return CheckResult(hermitian and value >= -threshold, value, threshold)

    def get_error_message(self) -> str:
        return "E*Q is not positive semidefinite"


class DissipationPsdCheck(StructureCheck):
    """``R >= 0``."""

    key = "r_psd"

    def evaluate(self, pencil: StructuredPencil, tol: Tolerance) -> CheckResult:
        value = min_eigenvalue(pencil.R, tol)
        threshold = tol.threshold(norm2(pencil.L), pencil.shape[0])
        return CheckResult(value >= -threshold, value, threshold)

    def get_error_message(self) -> str:
        return "R is not positive semidefinite"


class DissipativeCheck(StructureCheck):
    """``L + L* <= 0``."""

    key = "dissipative"

    def evaluate(self, pencil: StructuredPencil, tol: Tolerance) -> CheckResult:
        assert pencil.L is not None
        value = max_eigenvalue(pencil.L + adjoint(pencil.L), tol)
        threshold = 2 * tol.threshold(norm2(pencil.L), pencil.shape[0])
        return CheckResult(value <= threshold, value, threshold)

    def get_error_message(self) -> str:
        return "L + L* is not negative semidefinite"


@dataclass(frozen=True)
class StructureReport:
    """Outcome of every structural hypothesis on a pencil."""

    b1a: CheckResult
    b1b: CheckResult
    b1c: CheckResult
    r_psd: CheckResult
    dissipative: CheckResult

    @property
    def dh_hypotheses(self) -> bool:
        """``E*Q = Q*E >= 0`` and ``R >= 0``."""
        return self.b1a.passed and self.b1c.passed and self.r_psd.passed

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results().values())

    def results(self) -> dict[str, CheckResult]:
        return {
            "b1a": self.b1a,
            "b1b": self.b1b,
            "b1c": self.b1c,
            "r_psd": self.r_psd,
            "dissipative": self.dissipative,
        }

    def failures(self) -> list[str]:
        """Keys of the failed checks."""
        return [key for key, result in self.results().items() if not result.passed]

    def to_dict(self) -> dict[str, Any]:
        return {key: result.to_dict() for key, result in self.results().items()}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "StructureReport":
        return cls(**{key: CheckResult.from_dict(data[key]) for key in
                      ("b1a", "b1b", "b1c", "r_psd", "dissipative")})


class StructureCheckChain:
    """Runs a chain of structural checks and remembers the failed ones."""

    def __init__(self, checks: list[StructureCheck] | None = None) -> None:
        """Initialize with an optional list of checks (the full set by default)."""
        if checks is None:
            hermitian = HermitianProductCheck()
            checks = [
                hermitian,
                HermitianCoproductCheck(),
                HamiltonianPsdCheck(hermitian),
                DissipationPsdCheck(),
                DissipativeCheck(),
            ]
        self.checks = checks
        self._failed: list[StructureCheck] = []

    def add_check(self, check: StructureCheck) -> None:
        """Add a check to the chain."""
        self.checks.append(check)

    def run(self, pencil: StructuredPencil, tol: Tolerance) -> dict[str, CheckResult]:
        """Run every check; unlike a validation chain nothing short-circuits."""
        self._failed = []
        results: dict[str, CheckResult] = {}
        for check in self.checks:
            result = check.evaluate(pencil, tol)
            results[check.key] = result
            if not result.passed:
                self._failed.append(check)
        return results

    def get_failure_reasons(self) -> list[str]:
        """Messages of the checks that failed in the last run."""
        return [check.get_error_message() for check in self._failed]


def check_structure(
    pencil: StructuredPencil, tol: Tolerance = DEFAULT_TOLERANCE
) -> StructureReport:
    """Check the structural hypotheses of a pencil.

    Identity checks compare against ``threshold(||E|| ||Q||)``, the semidefiniteness
    check of ``E*Q`` against ``threshold(||E*Q||)``; loosening ``tol`` never turns a
    passing flag into a failing one.
    """
    chain = StructureCheckChain()
    results = chain.run(pencil, tol)
    reasons = chain.get_failure_reasons()
    if reasons:
        logger.info(f"Structure check on {pencil!r}: {'; '.join(reasons)}")
    return StructureReport(**results)
