"""Spectral analysis of dissipative Hamiltonian pencils ``lambda E - (J - R) Q``."""

import logging

from ..core.errors import DhPencilError
from ..kronecker.deflating import regular_deflating_basis
from ..kronecker.staircase import staircase
from ..kronecker.structure import KroneckerStructure
from ..linalg.kernels import adjoint, hermitian_part, min_eigenvalue, norm2
from ..linalg.tolerance import DEFAULT_TOLERANCE, Tolerance
from ..pencils.structure_check import check_structure
from ..pencils.structured_pencil import StructuredPencil
from .report import (
    GuaranteeStatus,
    ImaginaryEigenvalueCheck,
    StabilityReport,
    guarantee_status,
)

logger = logging.getLogger(__name__)


def spectral_scale(structure: KroneckerStructure) -> float:
    """``max(1, |lambda|)`` over the finite eigenvalues."""
    return max([1.0] + [abs(ev.value) for ev in structure.finite_eigenvalues])


def _imaginary_checks(
    pencil: StructuredPencil, structure: KroneckerStructure, tol: Tolerance
) -> list[ImaginaryEigenvalueCheck]:
    scale = spectral_scale(structure)
    r, q = pencil.R, pencil.Q
    checks: list[ImaginaryEigenvalueCheck] = []
    for ev in structure.finite_eigenvalues:
        value = ev.value
        if abs(value.real) > tol.axis * scale or abs(value) <= tol.zero * scale:
            continue
        try:
            basis = regular_deflating_basis(pencil.E, pencil.A, value, tol)
            v = basis.V
            residual = norm2(r @ q @ v)
            bound = tol.cluster * norm2(r) * norm2(q) * max(norm2(v), 1.0) + tol.absolute
        except DhPencilError as e:
            logger.debug(f"no deflating basis for {value}: {e}")
            residual, bound = float("nan"), 0.0
        checks.append(ImaginaryEigenvalueCheck(value, ev.jordan_sizes, residual, bound))
    return checks


def analyze_dh_pencil(
    pencil: StructuredPencil, tol: Tolerance = DEFAULT_TOLERANCE
) -> StabilityReport:
    """Check the spectral guarantees for dissipative Hamiltonian pencils on ``pencil``.

    The hypotheses (``E*Q = Q*E >= 0``, ``R >= 0``, zero left minimal indices of
    ``lambda E - Q``, and a regular ``lambda E - Q`` for the left indices of ``P``) are
    diagnosed rather than required. Eigenvalues count as on the imaginary axis when
    ``|Re lambda| <= axis * s`` and as zero when ``|lambda| <= zero * s``, with
    ``s = max(1, |lambda|_max)``.

    Args:
        pencil: Pencil to analyze.
        tol: Tolerance settings.

    Returns:
        Observed flags, per-eigenvalue checks on the imaginary axis and the status of
        every guarantee.
    """
    hypotheses = check_structure(pencil, tol)
    eq_structure = staircase(pencil.E, pencil.Q, tol).structure
    structure = staircase(pencil.E, pencil.A, tol).structure
    scale = spectral_scale(structure)

    lhp_ok = all(ev.value.real <= tol.axis * scale for ev in structure.finite_eigenvalues)
    imaginary = _imaginary_checks(pencil, structure, tol)
    index_ok = structure.index <= 2
    right_ok = all(eps <= 1 for eps in structure.right_minimal_indices)
    left_ok = all(eta == 0 for eta in structure.left_minimal_indices)

    product = hermitian_part(adjoint(pencil.E) @ pencil.Q)
    dissipation = adjoint(pencil.Q) @ pencil.R @ pencil.Q
    hamiltonian_min = min_eigenvalue(product, tol) if product.size else 0.0
    dissipation_min = min_eigenvalue(hermitian_part(dissipation), tol) if dissipation.size else 0.0

    left_eq_zero = all(eta == 0 for eta in eq_structure.left_minimal_indices)
    hold = hypotheses.dh_hypotheses and left_eq_zero
    applicable = hold and eq_structure.is_regular
    guarantees = {
        "lhp": guarantee_status(lhp_ok, hold),
        "imaginary_semisimple": guarantee_status(all(c.semisimple for c in imaginary), hold),
        "rqv": guarantee_status(all(c.residual_ok for c in imaginary), hold),
        "index": guarantee_status(index_ok, hold),
        "right_indices": guarantee_status(right_ok, hold),
        "left_indices": guarantee_status(left_ok, applicable, applicable or not hold),
    }
    report = StabilityReport(
        eigen_data=structure,
        hypothesis_report=hypotheses,
        eq_structure=eq_structure,
        lhp_ok=lhp_ok,
        imaginary=tuple(imaginary),
        index_ok=index_ok,
        right_indices_ok=right_ok,
        left_indices_ok=left_ok,
        left_indices_applicable=applicable,
        hamiltonian_min=float(hamiltonian_min),
        dissipation_min=float(dissipation_min),
        guarantees=guarantees,
        name=pencil.name,
    )
    if not hold:
        logger.info(f"{pencil!r}: hypotheses unmet, guarantees are not asserted")
    if report.counterexample:
        failed = [k for k, s in guarantees.items() if s is GuaranteeStatus.COUNTEREXAMPLE]
        logger.warning(f"{pencil!r}: guarantees {failed} failed with verified hypotheses")
    if not report.eq_regularity_consistent:
        logger.warning(f"{pencil!r}: P is regular but lambda E - Q was found singular")
    return report
