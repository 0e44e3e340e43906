"""Right regular deflating subspaces of (possibly singular) pencils."""

import cmath
import logging

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..core.errors import NotAnEigenvalue, ShapeMismatch
from ..linalg.kernels import Matrix, as_matrix, householder_qr, norm2
from ..linalg.tolerance import DEFAULT_TOLERANCE, Tolerance
from .staircase import StaircaseDecomposition, decompose
from .structure import DeflatingBasis

logger = logging.getLogger(__name__)


def _vec(m: Matrix) -> NDArray[np.inexact]:
    return m.reshape(-1, order="F")


def solve_coupled_sylvester(
    a1: Matrix, b1: Matrix, c1: Matrix, a2: Matrix, b2: Matrix, c2: Matrix
) -> tuple[Matrix, Matrix, float]:
    """Least-squares solution of ``a1 X + Y b1 = c1``, ``a2 X + Y b2 = c2``.

    Returns:
        ``(X, Y, residual)`` with the Frobenius norm of the residual.
    """
    p, q = a1.shape[1], b1.shape[1]
    r = a1.shape[0]
    if c1.size == 0:
        dtype = np.result_type(a1, b1, c1)
        return np.zeros((p, q), dtype=dtype), np.zeros((r, b1.shape[0]), dtype=dtype), 0.0
    eye_q = np.eye(q)
    eye_r = np.eye(r)
    system = np.block(
        [
            [np.kron(eye_q, a1), np.kron(b1.T, eye_r)],
            [np.kron(eye_q, a2), np.kron(b2.T, eye_r)],
        ]
    )
    rhs = np.concatenate([_vec(c1), _vec(c2)])
    sol, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    x = sol[: p * q].reshape((p, q), order="F")
    y = sol[p * q :].reshape((r, b1.shape[0]), order="F")
    residual = float(np.linalg.norm(system @ sol - rhs))
    return x, y, residual


def _split_off_block(dec: StaircaseDecomposition, k: int) -> tuple[Matrix, Matrix, float]:
    """Transforms ``(Y, X)`` in staircase coordinates decoupling diagonal block ``k``.

    Block ``k`` is made block diagonal against everything before and after it; the
    decoupled block comes first in the returned ordering.
    """
    n, m = dec.e.shape
    r0, r1 = dec.row_splits[k], dec.row_splits[k + 1]
    c0, c1 = dec.col_splits[k], dec.col_splits[k + 1]
    e, a = dec.e, dec.a
    dtype = np.result_type(e, a)

    # couple with the leading blocks: E11 Sx + Sy E22 = -E12 (and the same for A)
    sx1, sy1, res1 = solve_coupled_sylvester(
        e[:r0, :c0], e[r0:r1, c0:c1], -e[:r0, c0:c1],
        a[:r0, :c0], a[r0:r1, c0:c1], -a[:r0, c0:c1],
    )
    # couple with the trailing blocks: E22 Sx + Sy E33 = -E23
    sx3, sy3, res3 = solve_coupled_sylvester(
        e[r0:r1, c0:c1], e[r1:, c1:], -e[r0:r1, c1:],
        a[r0:r1, c0:c1], a[r1:, c1:], -a[r0:r1, c1:],
    )
    x = np.eye(m, dtype=dtype)
    x[:c0, c0:c1] = sx1
    x_b = np.eye(m, dtype=dtype)
    x_b[c0:c1, c1:] = sx3
    x = x @ x_b
    y = np.eye(n, dtype=dtype)
    y[:r0, r0:r1] = sy1
    y_b = np.eye(n, dtype=dtype)
    y_b[r0:r1, r1:] = sy3
    y = y_b @ y

    col_order = np.r_[c0:c1, :c0, c1:m]
    row_order = np.r_[r0:r1, :r0, r1:n]
    return y[row_order, :], x[:, col_order], max(res1, res3)


def regular_deflating_basis(
    e: ArrayLike,
    a: ArrayLike,
    eigenvalue: complex,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> DeflatingBasis:
    """Basis of a right regular deflating subspace of ``lambda E - A`` for ``eigenvalue``.

    Finite eigenvalues are shifted to zero and infinity is handled through the reversed
    pencil; the zero Jordan block of the staircase form is then decoupled from the rest
    by two generalized Sylvester equations.

    Args:
        e: Leading coefficient.
        a: Trailing coefficient.
        eigenvalue: Finite value or ``complex("inf")``.
        tol: Rank decision tolerance.

    Returns:
        Deflating basis with dimension equal to the algebraic multiplicity.

    Raises:
        NotAnEigenvalue: If ``eigenvalue`` is not an eigenvalue within tolerance.
    """
    em = as_matrix(e, "E")
    am = as_matrix(a, "A")
    if em.shape != am.shape:
        raise ShapeMismatch(f"E and A must have the same shape, got {em.shape} and {am.shape}")
    value = complex(eigenvalue)
    if cmath.isinf(value):
        se, sa = am, em
    else:
        shift = value.real if value.imag == 0 else value
        se, sa = em, am - shift * em
    dec = decompose(se, sa, tol)
    rows, cols = dec.block(1)
    k = rows.stop - rows.start
    if k == 0 or cols.stop - cols.start != k:
        raise NotAnEigenvalue(f"{value} is not an eigenvalue of the pencil")

    y_st, x_st, residual = _split_off_block(dec, 1)
    y = y_st @ dec.left
    x = dec.right @ x_st
    scale = norm2(em) + norm2(am)
    if residual > tol.threshold(max(scale, 1.0), max(em.shape)) ** 0.5:
        logger.warning(f"deflating split for {value}: Sylvester residual {residual:.3e}")
    q, _ = householder_qr(x[:, :k])
    logger.debug(f"regular deflating subspace for {value}: dimension {k}")
    return DeflatingBasis(
        eigenvalue=value,
        V=q[:, :k],
        Y=y,
        X=x,
        split_residual=residual,
        metadata={"zero_sizes": list(dec.zero_sizes)},
    )
