"""Dense linear algebra kernels shared by every pencil module.

All functions are pure: inputs are never modified and the results are fresh arrays.
Rank decisions use ``Tolerance.threshold`` with the largest singular value (or an
explicitly supplied pencil scale) as reference.
"""

import logging
from collections.abc import Sequence
from typing import Literal

import numpy as np
import scipy.linalg as sla
from numpy.typing import ArrayLike, NDArray

from ..core.errors import ColumnsNotOrthonormal, InvalidInput, NonSquare, NotHermitian
from .tolerance import DEFAULT_TOLERANCE, Tolerance

logger = logging.getLogger(__name__)

Matrix = NDArray[np.inexact]
Field = Literal["real", "complex"]


def as_matrix(a: ArrayLike, name: str = "matrix") -> Matrix:
    """Convert ``a`` to a finite 2-D float or complex array.

    Raises:
        InvalidInput: If ``a`` is not two-dimensional or holds NaN/Inf.
    """
    arr = np.asarray(a)
    if arr.ndim != 2:
        raise InvalidInput(f"{name} must be two-dimensional, got shape {arr.shape}")
    if np.iscomplexobj(arr):
        arr = arr.astype(np.complex128, copy=True)
    else:
        try:
            arr = arr.astype(np.float64, copy=True)
        except (TypeError, ValueError) as e:
            raise InvalidInput(f"{name} has non-numeric entries") from e
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{name} has non-finite entries")
    return arr


def field_of(*arrays: NDArray[np.generic]) -> Field:
    """Return ``"complex"`` if any array is complex, else ``"real"``."""
    return "complex" if any(np.iscomplexobj(a) for a in arrays) else "real"


def adjoint(a: Matrix) -> Matrix:
    """Adjoint: transpose over the reals, conjugate transpose over the complex field."""
    return a.conj().T if np.iscomplexobj(a) else a.T


def norm2(a: NDArray[np.generic]) -> float:
    """Spectral norm, zero for empty matrices."""
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def fro(a: NDArray[np.generic]) -> float:
    """Frobenius norm, zero for empty matrices."""
    return float(np.linalg.norm(a)) if a.size else 0.0


def hermitian_part(a: Matrix) -> Matrix:
    """Return (A + A*)/2."""
    return (a + adjoint(a)) / 2


def maybe_real(a: NDArray[np.complexfloating], threshold: float) -> Matrix:
    """Drop a negligible imaginary part."""
    if np.iscomplexobj(a) and (a.size == 0 or np.max(np.abs(a.imag)) <= threshold):
        return np.ascontiguousarray(a.real)
    return a


def flip(n: int) -> NDArray[np.float64]:
    """Reversal permutation matrix of order ``n``."""
    return np.eye(n)[::-1].copy()


def householder_qr(a: ArrayLike) -> tuple[Matrix, Matrix]:
    """Full QR factorization ``A = Q R`` by Householder reflections (LAPACK geqrf).

    Args:
        a: Any rectangular matrix.

    Returns:
        Tuple of unitary ``Q`` (rows x rows) and upper-trapezoidal ``R``.
    """
    arr = as_matrix(a, "A")
    rows, cols = arr.shape
    if arr.size == 0:
        return np.eye(rows, dtype=arr.dtype), np.zeros((rows, cols), dtype=arr.dtype)
    q, r = sla.qr(arr, mode="full")
    return q, r


def svd(a: ArrayLike) -> tuple[Matrix, NDArray[np.float64], Matrix]:
    """Full singular value decomposition ``A = U diag(s) V*``.

    Returns:
        Tuple ``(U, s, V)`` with ``s`` descending. ``V`` is returned, not ``V*``.
    """
    arr = as_matrix(a, "A")
    rows, cols = arr.shape
    if arr.size == 0:
        return (
            np.eye(rows, dtype=arr.dtype),
            np.zeros(0),
            np.eye(cols, dtype=arr.dtype),
        )
    u, s, vh = sla.svd(arr, full_matrices=True, lapack_driver="gesvd")
    return u, s, adjoint(vh)


def rank_threshold(a: NDArray[np.generic], tol: Tolerance, scale: float | None = None) -> float:
    """Threshold below which singular values of ``a`` are treated as zero."""
    ref = norm2(a) if scale is None else scale
    return tol.threshold(ref, max(a.shape) if a.ndim == 2 else 1)


def numerical_rank(
    a: ArrayLike, tol: Tolerance = DEFAULT_TOLERANCE, scale: float | None = None
) -> int:
    """Count singular values above ``max(rows, cols) * relative * sigma_max + absolute``.

    Args:
        a: Matrix to inspect.
        tol: Tolerance settings.
        scale: Reference norm replacing ``sigma_max`` (used for pencil-global decisions).
    """
    arr = as_matrix(a, "A")
    if arr.size == 0:
        return 0
    s = sla.svdvals(arr)
    return int(np.sum(s > rank_threshold(arr, tol, scale if scale is not None else s[0])))


def kernel_basis(
    a: ArrayLike, tol: Tolerance = DEFAULT_TOLERANCE, scale: float | None = None
) -> Matrix:
    """Orthonormal basis of the numerical right null space of ``a``."""
    arr = as_matrix(a, "A")
    u, s, v = svd(arr)
    r = int(np.sum(s > rank_threshold(arr, tol, scale))) if s.size else 0
    return v[:, r:]


def range_basis(
    a: ArrayLike, tol: Tolerance = DEFAULT_TOLERANCE, scale: float | None = None
) -> Matrix:
    """Orthonormal basis of the numerical column space of ``a``."""
    arr = as_matrix(a, "A")
    u, s, _ = svd(arr)
    r = int(np.sum(s > rank_threshold(arr, tol, scale))) if s.size else 0
    return u[:, :r]


def range_projector(
    a: ArrayLike, tol: Tolerance = DEFAULT_TOLERANCE, scale: float | None = None
) -> Matrix:
    """Orthogonal projector onto the numerical column space of ``a``."""
    basis = range_basis(a, tol, scale)
    return basis @ adjoint(basis)


def pseudoinverse(q: ArrayLike, tol: Tolerance = DEFAULT_TOLERANCE) -> Matrix:
    """Moore-Penrose inverse by SVD truncation at the numerical rank."""
    arr = as_matrix(q, "Q")
    rows, cols = arr.shape
    if arr.size == 0:
        return np.zeros((cols, rows), dtype=arr.dtype)
    u, s, v = svd(arr)
    r = int(np.sum(s > rank_threshold(arr, tol)))
    return (v[:, :r] / s[:r]) @ adjoint(u[:, :r])


def is_hermitian(a: ArrayLike, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    """Check ``||A - A*|| <= threshold(||A||)`` for a square matrix."""
    arr = as_matrix(a, "A")
    if arr.shape[0] != arr.shape[1]:
        return False
    return norm2(arr - adjoint(arr)) <= rank_threshold(arr, tol)


def hermitian_eig(
    a: ArrayLike, tol: Tolerance = DEFAULT_TOLERANCE
) -> tuple[NDArray[np.float64], Matrix]:
    """Eigendecomposition of a Hermitian matrix.

    Returns:
        Ascending real eigenvalues and a unitary matrix of eigenvectors.

    Raises:
        NonSquare: If ``a`` is not square.
        NotHermitian: If ``||A - A*||`` exceeds the tolerance.
    """
    arr = as_matrix(a, "A")
    if arr.shape[0] != arr.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {arr.shape}")
    if arr.size == 0:
        return np.zeros(0), np.zeros((0, 0), dtype=arr.dtype)
    asym = norm2(arr - adjoint(arr))
    if asym > rank_threshold(arr, tol):
        raise NotHermitian(f"matrix is not Hermitian (||A - A*|| = {asym:.3e})")
    w, v = sla.eigh(hermitian_part(arr))
    return w, v


def min_eigenvalue(a: ArrayLike, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """Smallest eigenvalue of a Hermitian matrix, ``+inf`` for empty input."""
    w, _ = hermitian_eig(a, tol)
    return float(w[0]) if w.size else float("inf")


def max_eigenvalue(a: ArrayLike, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """Largest eigenvalue of a Hermitian matrix, ``-inf`` for empty input."""
    w, _ = hermitian_eig(a, tol)
    return float(w[-1]) if w.size else float("-inf")


def is_psd(a: ArrayLike, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    """Hermitian and ``lambda_min >= -threshold(||A||)``."""
    arr = as_matrix(a, "A")
    if not is_hermitian(arr, tol):
        return False
    return min_eigenvalue(arr, tol) >= -rank_threshold(arr, tol)


def psd_sqrt(a: ArrayLike, tol: Tolerance = DEFAULT_TOLERANCE) -> Matrix:
    """Principal square root of a psd matrix; small negative eigenvalues are clipped."""
    w, v = hermitian_eig(a, tol)
    if w.size == 0:
        return v
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ adjoint(v)


def psd_pinv_sqrt(a: ArrayLike, tol: Tolerance = DEFAULT_TOLERANCE) -> Matrix:
    """``(A|_{im A})^{-1/2}`` extended by zero on ``ker A``."""
    arr = as_matrix(a, "A")
    w, v = hermitian_eig(arr, tol)
    if w.size == 0:
        return v
    keep = w > rank_threshold(arr, tol)
    inv_sqrt = np.zeros_like(w)
    inv_sqrt[keep] = 1.0 / np.sqrt(w[keep])
    return (v * inv_sqrt) @ adjoint(v)


def cs_decomposition(
    z1: ArrayLike, z2: ArrayLike, tol: Tolerance = DEFAULT_TOLERANCE
) -> tuple[Matrix, Matrix, Matrix, NDArray[np.float64], NDArray[np.float64]]:
    """CS decomposition of an orthonormal stack ``[Z1; Z2]`` of two n x n blocks.

    Args:
        z1: Upper block.
        z2: Lower block.
        tol: Tolerance used for the orthonormality precondition.

    Returns:
        ``(U1, U2, V, C, S)`` with ``U1 Z1 V = diag(C)`` and ``U2 Z2 V = diag(S)``,
        ``C, S >= 0`` and ``C**2 + S**2 = 1``.

    Raises:
        ColumnsNotOrthonormal: If ``[Z1; Z2]`` does not have orthonormal columns.
    """
    a = as_matrix(z1, "Z1")
    b = as_matrix(z2, "Z2")
    n = a.shape[1]
    if a.shape != (n, n) or b.shape != (n, n):
        raise NonSquare(f"CS blocks must be n x n, got {a.shape} and {b.shape}")
    dtype = np.result_type(a, b)
    if n == 0:
        empty = np.zeros((0, 0), dtype=dtype)
        return empty, empty, empty, np.zeros(0), np.zeros(0)

    gram = adjoint(a) @ a + adjoint(b) @ b
    defect = norm2(gram - np.eye(n))
    if defect > tol.threshold(1.0, 2 * n):
        raise ColumnsNotOrthonormal(f"||Z*Z - I|| = {defect:.3e}")

    u, c, v = svd(a)
    # columns of Z2 V are mutually orthogonal; complete them in order of decreasing norm
    w = b @ v
    order = np.argsort(-np.linalg.norm(w, axis=0), kind="stable")
    qw, rw = sla.qr(w[:, order])
    phase = np.ones(n, dtype=dtype)
    diag_r = np.diag(rw)
    nonzero = np.abs(diag_r) > 0
    phase[nonzero] = diag_r[nonzero] / np.abs(diag_r[nonzero])
    qw = qw * phase
    s_perm = np.abs(diag_r)
    s = np.empty(n)
    s[order] = s_perm
    u2 = np.zeros((n, n), dtype=np.result_type(qw, dtype))
    u2[:, order] = qw
    logger.debug(f"CS decomposition of order {n}: max |c^2 + s^2 - 1| = "
                 f"{np.max(np.abs(c**2 + s**2 - 1)):.2e}")
    return adjoint(u), adjoint(u2), v, c, s


def zero_deflation(
    m: ArrayLike, tol: Tolerance = DEFAULT_TOLERANCE, scale: float | None = None
) -> tuple[Matrix, Matrix, list[int]]:
    """Unitary deflation of the zero eigenvalue of a square matrix.

    Repeatedly compresses the null space of the trailing block to the front, giving
    ``V* M V = [[N, X], [0, Y]]`` with ``N`` strictly upper triangular (its diagonal
    blocks are exact zeros) and ``Y`` free of the eigenvalue zero.

    Returns:
        ``(V, V* M V, sizes)`` where ``sizes[j]`` is the kernel dimension found at step
        ``j``; ``sum(sizes)`` is the algebraic multiplicity of zero and ``sizes[0]`` the
        geometric one.
    """
    arr = as_matrix(m, "M")
    n = arr.shape[0]
    if arr.shape != (n, n):
        raise NonSquare(f"expected a square matrix, got shape {arr.shape}")
    ref = norm2(arr) if scale is None else scale
    thr = tol.threshold(ref, n)
    v_total = np.eye(n, dtype=arr.dtype)
    t = arr.copy()
    sizes: list[int] = []
    start = 0
    while start < n:
        block = t[start:, start:]
        _, s, v = svd(block)
        r = int(np.sum(s > thr))
        d = block.shape[0] - r
        if d == 0:
            break
        basis = np.concatenate([v[:, r:], v[:, :r]], axis=1)
        step = np.eye(n, dtype=np.result_type(v_total, basis))
        step[start:, start:] = basis
        v_total = v_total @ step
        t = adjoint(step) @ t.astype(step.dtype) @ step
        t[start:, start : start + d] = 0
        sizes.append(d)
        start += d
    return v_total, t, sizes


def ordered_schur_zero_trailing(
    m: ArrayLike, tol: Tolerance = DEFAULT_TOLERANCE
) -> tuple[Matrix, Matrix, int]:
    """Unitary triangularization ``W* M W = T`` with the zero eigenvalues trailing.

    ``T`` is lower triangular. The trailing ``n_zero`` diagonal entries are exactly
    zero and, when zero is semisimple, the trailing ``n_zero x n_zero`` block is the
    zero matrix.

    Args:
        m: Square matrix.
        tol: Tolerance for the rank decisions that locate the zero eigenvalues.

    Returns:
        ``(W, T, n_zero)``. Real input stays real unless complex eigenvalues force
        complex arithmetic.
    """
    arr = as_matrix(m, "M")
    n = arr.shape[0]
    if arr.shape != (n, n):
        raise NonSquare(f"expected a square matrix, got shape {arr.shape}")
    if n == 0:
        return np.eye(0, dtype=arr.dtype), arr.copy(), 0

    v0, t0, sizes = zero_deflation(arr, tol)
    n_zero = sum(sizes)
    v = v0.astype(np.complex128)
    t = t0.astype(np.complex128)
    if n_zero < n:
        ty, zy = sla.schur(t[n_zero:, n_zero:], output="complex")
        v[:, n_zero:] = v[:, n_zero:] @ zy
        t[:n_zero, n_zero:] = t[:n_zero, n_zero:] @ zy
        t[n_zero:, n_zero:] = ty
    t = np.triu(t)

    p = flip(n)
    w = v @ p
    lower = p @ t @ p
    thr = tol.threshold(norm2(arr), n)
    if not np.iscomplexobj(arr):
        w = maybe_real(w, thr)
        lower = maybe_real(lower, thr)
    logger.debug(f"ordered Schur of order {n}: n_zero={n_zero}, zero chain sizes={sizes}")
    return w, lower, n_zero


def block_diag(*blocks: ArrayLike) -> Matrix:
    """Block diagonal assembly accepting rectangular and empty blocks."""
    arrs = [np.atleast_2d(np.asarray(b)) for b in blocks]
    return sla.block_diag(*arrs) if arrs else np.zeros((0, 0))


def stack_blocks(rows: Sequence[Sequence[ArrayLike]]) -> Matrix:
    """Assemble a block matrix (thin wrapper around ``numpy.block``)."""
    return np.block([[np.asarray(b) for b in row] for row in rows])
