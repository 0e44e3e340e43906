"""Condensed form of a possibly singular pair ``(E, Q)`` with Hermitian ``E*Q``."""

import logging
from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import ArrayLike

from ..core.errors import ShapeMismatch, StructureViolated
from ..kronecker.staircase import decompose
from ..linalg.kernels import Matrix, as_matrix, block_diag, kernel_basis, norm2
from ..linalg.tolerance import DEFAULT_TOLERANCE, Tolerance
from .diagonal_forms import Nonneg, diagonalize_regular_pair, hermitian_product_defect

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CondensedFormEQ:
    """``U E X = [[E11, E12, 0], [0, E22, 0]]`` and likewise for ``Q``.

    ``E11``, ``Q11`` are real diagonal of order ``n1`` with ``E11**2 + Q11**2 = I``;
    ``lambda E22 - Q22`` (``m2 x n2``) carries only left singular blocks; the trailing
    ``zero_cols`` columns span the common kernel of ``E`` and ``Q``. The coupling blocks
    are one representative and are not canonical.
    """

    U: Matrix
    X: Matrix
    n1: int
    m2: int
    n2: int
    zero_cols: int
    E11: Matrix
    E12: Matrix
    E22: Matrix
    Q11: Matrix
    Q12: Matrix
    Q22: Matrix

    @property
    def partition(self) -> tuple[int, int, int, int]:
        return self.n1, self.m2, self.n2, self.zero_cols

    def _assemble(self, b11: Matrix, b12: Matrix, b22: Matrix) -> Matrix:
        rows = self.n1 + self.m2
        cols = self.n1 + self.n2 + self.zero_cols
        out = np.zeros((rows, cols), dtype=np.result_type(b11, b12, b22))
        out[: self.n1, : self.n1] = b11
        out[: self.n1, self.n1 : self.n1 + self.n2] = b12
        out[self.n1 :, self.n1 : self.n1 + self.n2] = b22
        return out

    def assembled_E(self) -> Matrix:
        return self._assemble(self.E11, self.E12, self.E22)

    def assembled_Q(self) -> Matrix:
        return self._assemble(self.Q11, self.Q12, self.Q22)

    def decoupled(self) -> tuple[Matrix, Matrix]:
        """Block diagonal pair ``diag(E11, E22, 0)``, ``diag(Q11, Q22, 0)``.

        It has the same Kronecker structure as ``lambda E - Q``.
        """
        pad = np.zeros((0, self.zero_cols))
        return block_diag(self.E11, self.E22, pad), block_diag(self.Q11, self.Q22, pad)

    def round_trip_residuals(self, e: ArrayLike, q: ArrayLike) -> tuple[float, float]:
        """``||U E X - assembled E||`` and the same for ``Q``."""
        em, qm = as_matrix(e, "E"), as_matrix(q, "Q")
        return (
            norm2(self.U @ em @ self.X - self.assembled_E()),
            norm2(self.U @ qm @ self.X - self.assembled_Q()),
        )

    def kernel_inclusions(self, tol: Tolerance = DEFAULT_TOLERANCE) -> tuple[float, float]:
        """Norms of ``E12`` on ``ker E22`` and ``Q12`` on ``ker Q22`` (zero when the
        inclusions hold)."""
        out = []
        for b12, b22 in ((self.E12, self.E22), (self.Q12, self.Q22)):
            if b22.shape[1] == 0:
                out.append(0.0)
                continue
            basis = kernel_basis(b22, tol, scale=max(norm2(b22), 1.0))
            out.append(norm2(b12 @ basis) if basis.size else 0.0)
        return out[0], out[1]

    def to_dict(self) -> dict[str, Any]:
        return {
            "n1": self.n1,
            "m2": self.m2,
            "n2": self.n2,
            "zero_cols": self.zero_cols,
            "E11": np.real(np.diag(self.E11)).tolist(),
            "Q11": np.real(np.diag(self.Q11)).tolist(),
        }


def condensed_form_EQ(
    e: ArrayLike,
    q: ArrayLike,
    tol: Tolerance = DEFAULT_TOLERANCE,
    nonneg: Nonneg = "E",
) -> CondensedFormEQ:
    """Condensed form of an n x m pair with ``E*Q = Q*E``.

    A unitary staircase reduction puts the regular part first and the left singular part
    last; right minimal indices of such pairs are all zero, so the right singular part
    is a block of zero columns. The regular diagonal block is then diagonalized.

    Raises:
        StructureViolated: If ``E*Q`` is not Hermitian.
    """
    em, qm = as_matrix(e, "E"), as_matrix(q, "Q")
    if em.shape != qm.shape:
        raise ShapeMismatch(f"E and Q must have the same shape, got {em.shape} and {qm.shape}")
    defect, threshold = hermitian_product_defect(em, qm, tol)
    if defect > threshold:
        raise StructureViolated(f"E*Q is not Hermitian (||E*Q - Q*E|| = {defect:.3e})")
    n, m = em.shape

    dec = decompose(em, qm, tol)
    if any(dec.right_indices):
        raise StructureViolated(
            f"nonzero right minimal indices {dec.right_indices} contradict Hermitian E*Q"
        )
    _, zero_cols = dec.block(0)
    reg_rows, reg_cols = dec.span(1, 3)
    _, sing_cols = dec.block(4)
    n1 = reg_rows.stop - reg_rows.start
    z = zero_cols.stop - zero_cols.start
    order = np.r_[reg_cols, sing_cols, zero_cols]
    x_stair = dec.right[:, order]
    te, tq = dec.e[:, order], dec.a[:, order]

    form = diagonalize_regular_pair(te[:n1, :n1], tq[:n1, :n1], tol, nonneg)
    dtype = np.result_type(form.U, dec.left)
    u = np.eye(n, dtype=dtype)
    u[:n1, :n1] = form.U
    x = np.eye(m, dtype=np.result_type(form.X, x_stair))
    x[:n1, :n1] = form.X
    u = u @ dec.left
    x = x_stair @ x

    width = m - n1 - z
    e12 = form.U @ te[:n1, n1 : n1 + width]
    q12 = form.U @ tq[:n1, n1 : n1 + width]
    e22 = te[n1:, n1 : n1 + width]
    q22 = tq[n1:, n1 : n1 + width]
    logger.debug(
        f"condensed form of {n}x{m} pair: n1={n1}, singular {e22.shape}, zero columns {z}"
    )
    return CondensedFormEQ(
        U=u,
        X=x,
        n1=n1,
        m2=n - n1,
        n2=width,
        zero_cols=z,
        E11=np.diag(form.d_e),
        E12=e12,
        E22=e22,
        Q11=np.diag(form.d_q),
        Q12=q12,
        Q22=q22,
    )
