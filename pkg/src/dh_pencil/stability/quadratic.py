"""Damped quadratic matrix polynomials ``lambda**2 M + lambda D + K``."""

import logging

from numpy.typing import ArrayLike

from ..core.errors import NotPsd, ShapeMismatch
from ..linalg.kernels import Matrix, as_matrix, min_eigenvalue, rank_threshold
from ..linalg.tolerance import DEFAULT_TOLERANCE, Tolerance
from ..pencils.fixtures.mechanical import mechanical_pencil
from .dh_analysis import analyze_dh_pencil
from .report import QuadraticReport

logger = logging.getLogger(__name__)


def _require_psd(a: Matrix, name: str, tol: Tolerance) -> None:
    if a.size and min_eigenvalue(a, tol) < -rank_threshold(a, tol):
        raise NotPsd(f"{name} is not positive semidefinite")


def analyze_quadratic(
    m: ArrayLike, d: ArrayLike, k: ArrayLike, tol: Tolerance = DEFAULT_TOLERANCE
) -> QuadraticReport:
    """Analyze ``lambda**2 M + lambda D + K`` with Hermitian positive semidefinite coefficients.

    The first order pencil ``lambda diag(M, I) - (J - diag(D, 0)) diag(I, K)`` keeps the
    eigenvalues, Jordan chains and left minimal indices of the polynomial and shifts its
    right minimal indices up by one, which is undone here.

    Raises:
        ShapeMismatch: If the coefficients are not square of one order.
        NotHermitian: If a coefficient is not Hermitian.
        NotPsd: If a coefficient is indefinite.
    """
    mm, dm, km = as_matrix(m, "M"), as_matrix(d, "D"), as_matrix(k, "K")
    size = mm.shape[0]
    for name, a in (("M", mm), ("D", dm), ("K", km)):
        if a.shape != (size, size):
            raise ShapeMismatch(f"{name} must be {size} x {size}, got {a.shape}")
        _require_psd(a, name, tol)

    report = analyze_dh_pencil(mechanical_pencil(mm, dm, km), tol)
    structure = report.eigen_data
    shift_consistent = all(eps >= 1 for eps in structure.right_minimal_indices)
    if not shift_consistent:
        logger.warning("linearization has a zero right minimal index; mapped to zero")
    right = tuple(max(eps - 1, 0) for eps in structure.right_minimal_indices)
    logger.debug(f"quadratic of order {size}: right {right}, left {structure.left_minimal_indices}")
    return QuadraticReport(
        linearization=report,
        right_minimal_indices=right,
        left_minimal_indices=structure.left_minimal_indices,
        shift_consistent=shift_consistent,
    )
