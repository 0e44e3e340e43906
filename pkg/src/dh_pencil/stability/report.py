"""Report types for the stability analyses."""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from ..kronecker.structure import KroneckerStructure, encode_eigenvalue
from ..pencils.structure_check import CheckResult, StructureReport


class GuaranteeStatus(Enum):
    """Outcome of one conditional guarantee."""

    HOLDS = "holds"
    NOT_GUARANTEED = "not_guaranteed"
    NOT_APPLICABLE = "not_applicable"
    COUNTEREXAMPLE = "counterexample"


def guarantee_status(observed: bool, hypotheses: bool, applicable: bool = True) -> GuaranteeStatus:
    """Classify an observation against the hypotheses that would guarantee it.

    A failed observation is only a counterexample when every hypothesis was verified.
    """
    if observed:
        return GuaranteeStatus.HOLDS
    if not applicable:
        return GuaranteeStatus.NOT_APPLICABLE
    if hypotheses:
        return GuaranteeStatus.COUNTEREXAMPLE
    return GuaranteeStatus.NOT_GUARANTEED


@dataclass(frozen=True)
class ImaginaryEigenvalueCheck:
    """Semisimplicity and ``||R Q V||`` for one nonzero eigenvalue on the imaginary axis.

    ``residual`` is ``nan`` when no deflating basis could be computed.
    """

    eigenvalue: complex
    jordan_sizes: tuple[int, ...]
    residual: float
    bound: float

    @property
    def semisimple(self) -> bool:
        return all(size == 1 for size in self.jordan_sizes)

    @property
    def residual_ok(self) -> bool:
        return not math.isnan(self.residual) and self.residual <= self.bound

    def to_dict(self) -> dict[str, Any]:
        return {
            "eigenvalue": encode_eigenvalue(self.eigenvalue),
            "jordan_sizes": list(self.jordan_sizes),
            "rqv_residual": None if math.isnan(self.residual) else self.residual,
            "bound": self.bound,
        }


@dataclass(frozen=True)
class StabilityReport:
    """Spectral observations on ``lambda E - L Q`` and the guarantees they are held to.

    The boolean flags record what was observed. ``guarantees`` says for each flag whether
    the structural hypotheses promised it, so an unmet hypothesis never reads as a
    violated guarantee.
    """

    eigen_data: KroneckerStructure
    hypothesis_report: StructureReport
    eq_structure: KroneckerStructure
    lhp_ok: bool
    imaginary: tuple[ImaginaryEigenvalueCheck, ...]
    index_ok: bool
    right_indices_ok: bool
    left_indices_ok: bool
    left_indices_applicable: bool
    hamiltonian_min: float
    dissipation_min: float
    guarantees: dict[str, GuaranteeStatus] = field(default_factory=dict)
    name: str = ""

    @property
    def eq_left_indices_zero(self) -> bool:
        """All left minimal indices of ``lambda E - Q`` are zero."""
        return all(eta == 0 for eta in self.eq_structure.left_minimal_indices)

    @property
    def hypotheses_hold(self) -> bool:
        return self.hypothesis_report.dh_hypotheses and self.eq_left_indices_zero

    @property
    def imaginary_semisimple_ok(self) -> bool:
        return all(check.semisimple for check in self.imaginary)

    @property
    def rqv_ok(self) -> bool:
        return all(check.residual_ok for check in self.imaginary)

    @property
    def counterexample(self) -> bool:
        """A guarantee failed although every hypothesis was verified."""
        return any(s is GuaranteeStatus.COUNTEREXAMPLE for s in self.guarantees.values())

    @property
    def eq_regularity_consistent(self) -> bool:
        """Regular ``P`` with Hermitian ``E*Q`` forces a regular ``lambda E - Q``."""
        if not (self.eigen_data.is_regular and self.hypothesis_report.b1a.passed):
            return True
        return self.eq_structure.is_regular

    @property
    def zero_jordan_sizes(self) -> tuple[int, ...]:
        return self.eigen_data.zero_jordan_sizes

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "eigen_data": self.eigen_data.to_dict(),
            "hypotheses": self.hypothesis_report.to_dict(),
            "eq_structure": self.eq_structure.to_dict(),
            "hypotheses_hold": self.hypotheses_hold,
            "lhp_ok": self.lhp_ok,
            "imaginary_semisimple_ok": self.imaginary_semisimple_ok,
            "imaginary_eigenvalues": [check.to_dict() for check in self.imaginary],
            "index_ok": self.index_ok,
            "right_indices_ok": self.right_indices_ok,
            "left_indices_ok": self.left_indices_ok,
            "left_indices_applicable": self.left_indices_applicable,
            "zero_jordan_sizes": list(self.zero_jordan_sizes),
            "hamiltonian_min": self.hamiltonian_min,
            "dissipation_min": self.dissipation_min,
            "guarantees": {key: status.value for key, status in self.guarantees.items()},
            "counterexample": self.counterexample,
        }


@dataclass(frozen=True)
class QuadraticReport:
    """Analysis of ``lambda**2 M + lambda D + K`` through its first order pencil.

    The right minimal indices of the first order pencil are those of the polynomial
    plus one. A zero right index there can only come from a rank decision at the
    tolerance; it is mapped to zero and ``shift_consistent`` is false, which also makes
    ``all_ok`` false.
    """

    linearization: StabilityReport
    right_minimal_indices: tuple[int, ...]
    left_minimal_indices: tuple[int, ...]
    shift_consistent: bool = True

    @property
    def spectrum_ok(self) -> bool:
        """Closed left half plane with semisimple nonzero imaginary eigenvalues."""
        return self.linearization.lhp_ok and self.linearization.imaginary_semisimple_ok

    @property
    def zero_chains_ok(self) -> bool:
        return max(self.linearization.zero_jordan_sizes, default=0) <= 2

    @property
    def infinite_chains_ok(self) -> bool:
        return self.linearization.eigen_data.index <= 2

    @property
    def minimal_indices_zero(self) -> bool:
        return not any(self.right_minimal_indices) and not any(self.left_minimal_indices)

    @property
    def is_regular(self) -> bool:
        return self.linearization.eigen_data.is_regular

    @property
    def all_ok(self) -> bool:
        return (
            self.spectrum_ok
            and self.zero_chains_ok
            and self.infinite_chains_ok
            and self.minimal_indices_zero
            and self.shift_consistent
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "linearization": self.linearization.to_dict(),
            "right_minimal_indices": list(self.right_minimal_indices),
            "left_minimal_indices": list(self.left_minimal_indices),
            "regular": self.is_regular,
            "spectrum_ok": self.spectrum_ok,
            "zero_chains_ok": self.zero_chains_ok,
            "infinite_chains_ok": self.infinite_chains_ok,
            "minimal_indices_zero": self.minimal_indices_zero,
            "shift_consistent": self.shift_consistent,
        }


@dataclass(frozen=True)
class LyapunovReport:
    """Generalized Lyapunov conditions for ``lambda E - A`` with a candidate ``Q``.

    ``stability`` is the analysis of ``lambda E - (A Q^+) Q``, present only when every
    condition holds; ``cross_check_ok`` compares it with the staircase of ``(E, A)``.
    """

    variant: str
    conditions: dict[str, CheckResult]
    stability: StabilityReport | None = None
    cross_check_ok: bool | None = None
    lyapunov_residual: float | None = None
    general_agrees: bool | None = None

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.conditions.values())

    @property
    def guarantees_confirmed(self) -> bool:
        """Every conclusion of the stability theorem observed on ``lambda E - A``."""
        if self.stability is None:
            return False
        s = self.stability
        return (
            s.lhp_ok
            and s.imaginary_semisimple_ok
            and s.index_ok
            and s.right_indices_ok
            and (s.left_indices_ok or not s.left_indices_applicable)
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "variant": self.variant,
            "conditions": {key: result.to_dict() for key, result in self.conditions.items()},
            "passed": self.passed,
            "stability": None if self.stability is None else self.stability.to_dict(),
            "cross_check_ok": self.cross_check_ok,
            "lyapunov_residual": self.lyapunov_residual,
            "general_agrees": self.general_agrees,
            "guarantees_confirmed": self.guarantees_confirmed,
        }
