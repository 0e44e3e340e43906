"""Generalized Lyapunov criteria for rectangular pencils ``lambda E - A``."""

import logging
from typing import Literal

from numpy.typing import ArrayLike

from ..core.errors import ShapeMismatch
from ..kronecker.staircase import staircase
from ..linalg.kernels import (
    Matrix,
    adjoint,
    as_matrix,
    hermitian_part,
    kernel_basis,
    max_eigenvalue,
    min_eigenvalue,
    norm2,
    numerical_rank,
    pseudoinverse,
)
from ..linalg.tolerance import DEFAULT_TOLERANCE, Tolerance
from ..pencils.structure_check import CheckResult
from ..pencils.structured_pencil import StructuredPencil
from .dh_analysis import analyze_dh_pencil
from .report import LyapunovReport

logger = logging.getLogger(__name__)

Variant = Literal["general", "square_invertible"]


def _minimal_indices_zero(e: Matrix, q: Matrix, tol: Tolerance) -> CheckResult:
    structure = staircase(e, q, tol).structure
    largest = max(structure.right_minimal_indices + structure.left_minimal_indices, default=0)
    return CheckResult(largest == 0, float(largest), 0.0)


def _product_psd(e: Matrix, q: Matrix, tol: Tolerance) -> CheckResult:
    prod = adjoint(e) @ q
    threshold = tol.threshold(norm2(e) * norm2(q), max(e.shape))
    defect = norm2(prod - adjoint(prod))
    if defect > threshold:
        return CheckResult(False, -defect, threshold)
    value = min_eigenvalue(hermitian_part(prod), tol) if prod.size else 0.0
    return CheckResult(value >= -threshold, value, threshold)


def _negative_semidefinite(h: Matrix, scale: float, tol: Tolerance) -> CheckResult:
    threshold = tol.threshold(scale, h.shape[0])
    value = max_eigenvalue(hermitian_part(h), tol) if h.size else 0.0
    return CheckResult(value <= threshold, value, threshold)


def _general_conditions(
    e: Matrix, a: Matrix, q: Matrix, tol: Tolerance
) -> tuple[dict[str, CheckResult], Matrix]:
    q_pinv = pseudoinverse(q, tol)
    ell = a @ q_pinv
    kernel = kernel_basis(q, tol)
    kernel_residual = norm2(a @ kernel) if kernel.size else 0.0
    kernel_threshold = tol.threshold(max(norm2(a), 1.0), max(a.shape))
    conditions = {
        "minimal_indices_zero": _minimal_indices_zero(e, q, tol),
        "product_psd": _product_psd(e, q, tol),
        "dissipative": _negative_semidefinite(ell + adjoint(ell), 2 * norm2(ell), tol),
        "kernel_inclusion": CheckResult(
            kernel_residual <= kernel_threshold, kernel_residual, kernel_threshold
        ),
    }
    return conditions, ell


def lyapunov_check(
    e: ArrayLike,
    a: ArrayLike,
    q: ArrayLike,
    tol: Tolerance = DEFAULT_TOLERANCE,
    variant: Variant = "general",
) -> LyapunovReport:
    """Check whether ``Q`` certifies stability of ``lambda E - A``.

    ``general`` checks zero minimal indices of ``lambda E - Q``, ``E*Q >= 0``,
    ``A Q^+ + (A Q^+)* <= 0`` and ``ker Q`` inside ``ker A``. ``square_invertible``
    asks for an invertible square ``Q`` with ``E*Q >= 0`` and ``Q*A + A*Q <= 0``, reports
    ``lambda_max(Q*A + A*Q)`` and records whether the general variant agrees.

    When the conditions hold, ``L = A Q^+`` makes ``lambda E - L Q = lambda E - A`` a
    dissipative Hamiltonian pencil; its analysis is attached and cross-checked against
    the staircase of ``(E, A)``. Failures are reported, never raised.

    Raises:
        ShapeMismatch: If ``E``, ``A``, ``Q`` differ in shape.
    """
    em, am, qm = as_matrix(e, "E"), as_matrix(a, "A"), as_matrix(q, "Q")
    if not em.shape == am.shape == qm.shape:
        raise ShapeMismatch(
            f"E, A and Q must have the same shape, got {em.shape}, {am.shape}, {qm.shape}"
        )
    general, ell = _general_conditions(em, am, qm, tol)
    residual: float | None = None
    agrees: bool | None = None
    if variant == "square_invertible":
        n, m = qm.shape
        rank = numerical_rank(qm, tol) if qm.size else 0
        lyap = adjoint(qm) @ am + adjoint(am) @ qm
        lyap_check = _negative_semidefinite(lyap, 2 * norm2(qm) * norm2(am), tol)
        residual = lyap_check.value
        conditions = {
            "q_invertible": CheckResult(n == m and rank == n, float(rank), float(n)),
            "product_psd": general["product_psd"],
            "lyapunov": lyap_check,
        }
        agrees = all(c.passed for c in conditions.values()) == all(
            c.passed for c in general.values()
        )
        if not agrees:
            logger.info("square invertible and general Lyapunov variants disagree")
    else:
        conditions = general

    report = LyapunovReport(
        variant=variant,
        conditions=conditions,
        lyapunov_residual=residual,
        general_agrees=agrees,
    )
    if not report.passed:
        failed = [key for key, c in conditions.items() if not c.passed]
        logger.info(f"Lyapunov conditions failed: {failed}")
        return report

    pencil = StructuredPencil(E=em, Q=qm, L=ell, name="lyapunov")
    stability = analyze_dh_pencil(pencil, tol)
    direct = staircase(em, am, tol).structure
    atol = tol.cluster * max(1.0, norm2(em) + norm2(am))
    cross = (
        direct.index == stability.eigen_data.index
        and direct.right_minimal_indices == stability.eigen_data.right_minimal_indices
        and direct.left_minimal_indices == stability.eigen_data.left_minimal_indices
        and direct.zero_jordan_sizes == stability.eigen_data.zero_jordan_sizes
        and direct.matches_nonzero(stability.eigen_data, atol)
    )
    if not cross:
        logger.warning(f"L Q = A reconstruction changed the structure: {norm2(pencil.A - am):.3e}")
    return LyapunovReport(
        variant=variant,
        conditions=conditions,
        stability=stability,
        cross_check_ok=cross,
        lyapunov_residual=residual,
        general_agrees=agrees,
    )
