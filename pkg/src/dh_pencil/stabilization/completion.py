"""Matrix lemmas behind the stabilizing perturbations."""

import logging
from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import ArrayLike

from ..core.errors import NotPsd, RangeConditionViolated, ShapeMismatch
from ..linalg.kernels import (
    Matrix,
    adjoint,
    as_matrix,
    hermitian_part,
    is_psd,
    min_eigenvalue,
    norm2,
    psd_pinv_sqrt,
    psd_sqrt,
    range_projector,
    stack_blocks,
)
from ..linalg.tolerance import DEFAULT_TOLERANCE, Tolerance

logger = logging.getLogger(__name__)


def min_norm_annihilator(
    b: ArrayLike, c: ArrayLike, tol: Tolerance = DEFAULT_TOLERANCE
) -> Matrix:
    """Smallest ``Z`` (spectral and Frobenius norm) with ``B (C + Z) = 0``.

    ``Z = -P C`` with ``P`` the orthogonal projector onto ``im B*``.

    Raises:
        ShapeMismatch: If ``B`` and ``C`` cannot be multiplied.
    """
    bm, cm = as_matrix(b, "B"), as_matrix(c, "C")
    if bm.shape[1] != cm.shape[0]:
        raise ShapeMismatch(f"B is {bm.shape} but C has {cm.shape[0]} rows")
    if bm.size == 0:
        return np.zeros_like(cm)
    return -(range_projector(adjoint(bm), tol) @ cm)


@dataclass(frozen=True, eq=False)
class GammaCertificate:
    """Outcome of testing ``[[B, E*], [E, F]] >= 0`` through a contraction.

    ``gamma = B^{+1/2} E* F^{+1/2}``; the block is positive semidefinite exactly when
    ``||gamma|| <= 1`` and ``E* = B^{1/2} gamma F^{1/2}``.
    """

    success: bool
    gamma: Matrix
    gamma_norm: float
    residual: float
    block_min_eigenvalue: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "success": self.success,
            "gamma_norm": self.gamma_norm,
            "residual": self.residual,
            "block_min_eigenvalue": self.block_min_eigenvalue,
        }


def gamma_certificate(
    b: ArrayLike, f: ArrayLike, e: ArrayLike, tol: Tolerance = DEFAULT_TOLERANCE
) -> GammaCertificate:
    """Decide ``[[B, E*], [E, F]] >= 0`` for psd ``B`` (k x k), ``F`` (m x m), ``E`` (m x k).

    Failure is reported rather than raised; an indefinite ``B`` or ``F`` never succeeds.
    """
    bm, fm, em = as_matrix(b, "B"), as_matrix(f, "F"), as_matrix(e, "E")
    k, m = bm.shape[0], fm.shape[0]
    if bm.shape != (k, k) or fm.shape != (m, m) or em.shape != (m, k):
        raise ShapeMismatch(f"incompatible blocks B {bm.shape}, F {fm.shape}, E {em.shape}")
    dim = k + m
    scale = max(norm2(bm), norm2(fm), norm2(em), 1.0)

    gamma = psd_pinv_sqrt(bm, tol) @ adjoint(em) @ psd_pinv_sqrt(fm, tol)
    gamma_norm = norm2(gamma)
    residual = norm2(adjoint(em) - psd_sqrt(bm, tol) @ gamma @ psd_sqrt(fm, tol))
    block = stack_blocks([[bm, adjoint(em)], [em, fm]])
    block_min = min_eigenvalue(hermitian_part(block), tol) if dim else 0.0

    slack = tol.threshold(1.0, dim) ** 0.5
    success = (
        (k == 0 or is_psd(bm, tol))
        and (m == 0 or is_psd(fm, tol))
        and gamma_norm <= 1.0 + slack
        and residual <= slack * scale
    )
    if success != (block_min >= -tol.threshold(scale, dim)):
        logger.debug(
            f"contraction test ({success}) and eigenvalue test "
            f"(lambda_min = {block_min:.3e}) disagree"
        )
    return GammaCertificate(success, gamma, gamma_norm, residual, block_min)


def psd_completion(
    b: ArrayLike,
    d: ArrayLike,
    c: ArrayLike,
    y: ArrayLike,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> tuple[Matrix, float]:
    """Find ``W`` with ``[[B, (C + Y)*], [C + Y, D + W]] >= 0``.

    With ``a = ||B^{+1/2} Y* (D + ||Y|| I)^{-1/2}||`` the choice
    ``W = (a**2 + 2 a)(D + ||Y|| I) + ||Y|| I`` works whenever ``im Y*`` lies in ``im B``.
    ``Y = 0`` gives ``W = 0`` and ``a = 0``.

    Args:
        b: k x k block of a positive semidefinite ``[[B, C*], [C, D]]``.
        d: m x m block.
        c: m x k block.
        y: m x k perturbation of ``C``.
        tol: Tolerance settings.

    Returns:
        ``(W, a)``.

    Raises:
        ShapeMismatch: If the blocks do not fit together.
        NotPsd: If ``[[B, C*], [C, D]]`` is not positive semidefinite.
        RangeConditionViolated: If ``im Y*`` is not contained in ``im B``.
    """
    bm, dm, cm, ym = as_matrix(b, "B"), as_matrix(d, "D"), as_matrix(c, "C"), as_matrix(y, "Y")
    k, m = bm.shape[0], dm.shape[0]
    if bm.shape != (k, k) or dm.shape != (m, m) or cm.shape != (m, k) or ym.shape != (m, k):
        raise ShapeMismatch(
            f"incompatible blocks B {bm.shape}, D {dm.shape}, C {cm.shape}, Y {ym.shape}"
        )
    block = stack_blocks([[bm, adjoint(cm)], [cm, dm]])
    if block.size and not is_psd(block, tol):
        raise NotPsd("[[B, C*], [C, D]] is not positive semidefinite")

    if not np.any(ym):
        return np.zeros((m, m), dtype=np.result_type(dm, ym)), 0.0

    y_norm = norm2(ym)
    outside = norm2((np.eye(k) - range_projector(bm, tol)) @ adjoint(ym)) if k else y_norm
    if outside > tol.threshold(max(y_norm, 1.0), k + m):
        raise RangeConditionViolated(f"im Y* leaves im B: ||(I - P) Y*|| = {outside:.3e}")

    shifted = hermitian_part(dm) + y_norm * np.eye(m)
    alpha = norm2(psd_pinv_sqrt(bm, tol) @ adjoint(ym) @ psd_pinv_sqrt(shifted, tol))
    w = (alpha**2 + 2 * alpha) * shifted + y_norm * np.eye(m)

    certificate = gamma_certificate(bm, dm + w, cm + ym, tol)
    if not certificate.success:
        logger.warning(
            f"completed block failed its certificate: ||gamma|| = {certificate.gamma_norm:.3e}, "
            f"lambda_min = {certificate.block_min_eigenvalue:.3e}"
        )
    logger.debug(f"psd completion: ||Y|| = {y_norm:.3e}, alpha = {alpha:.3e}")
    return w, float(alpha)
