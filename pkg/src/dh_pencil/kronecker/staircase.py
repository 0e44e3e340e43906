"""Unitary staircase reduction of a rectangular pencil ``lambda E - A``.

The reduction produces a block upper triangular form whose diagonal blocks are, in
order: the right singular part, the Jordan blocks at zero, the remaining finite
eigenvalues, the infinite Jordan blocks and the left singular part. Every rank
decision uses one pencil-global threshold
``max(n, m) * relative * (||E|| + ||A||) + absolute``.
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg as sla
from numpy.typing import ArrayLike

from ..core.errors import DhPencilError, ShapeMismatch
from ..linalg.kernels import Matrix, adjoint, as_matrix, norm2, svd
from ..linalg.tolerance import DEFAULT_TOLERANCE, Tolerance
from .structure import (
    FiniteEigenvalue,
    KroneckerStructure,
    sorted_desc,
)

logger = logging.getLogger(__name__)


class StaircaseForm(NamedTuple):
    """Kronecker structure with unitary ``left``, ``right`` so that
    ``left (lambda E - A) right`` is the block upper triangular staircase form."""

    structure: KroneckerStructure
    left_transform: Matrix
    right_transform: Matrix


class RegularPart(NamedTuple):
    """Square regular diagonal block of the staircase form.

    ``rows (lambda E - A) cols = lambda E_r - A_r`` where ``rows`` holds orthonormal rows
    and ``cols`` orthonormal columns.
    """

    E: Matrix
    A: Matrix
    rows: Matrix
    cols: Matrix


@dataclass
class StaircaseDecomposition:
    """Full result of the five-block reduction.

    ``row_splits``/``col_splits`` hold the block boundaries
    ``[0, right, zero, finite, infinite, n]`` in the transformed coordinates.
    """

    e: Matrix
    a: Matrix
    left: Matrix
    right: Matrix
    row_splits: tuple[int, ...]
    col_splits: tuple[int, ...]
    right_indices: tuple[int, ...]
    zero_sizes: tuple[int, ...]
    infinite_sizes: tuple[int, ...]
    left_indices: tuple[int, ...]
    threshold: float

    def block(self, k: int) -> tuple[slice, slice]:
        """Row and column slices of diagonal block ``k`` (0..4)."""
        return (
            slice(self.row_splits[k], self.row_splits[k + 1]),
            slice(self.col_splits[k], self.col_splits[k + 1]),
        )

    def span(self, first: int, last: int) -> tuple[slice, slice]:
        """Row and column slices covering diagonal blocks ``first..last`` inclusive."""
        return (
            slice(self.row_splits[first], self.row_splits[last + 1]),
            slice(self.col_splits[first], self.col_splits[last + 1]),
        )


class _Workspace:
    """Pencil under unitary equivalence, with the accumulated transforms."""

    def __init__(self, e: Matrix, a: Matrix, threshold: float):
        dtype = np.result_type(e, a, np.float64)
        self.e = e.astype(dtype, copy=True)
        self.a = a.astype(dtype, copy=True)
        n, m = e.shape
        self.left = np.eye(n, dtype=dtype)
        self.right = np.eye(m, dtype=dtype)
        self.threshold = threshold

    def _promote(self, u: Matrix) -> None:
        if np.iscomplexobj(u) and not np.iscomplexobj(self.e):
            self.e = self.e.astype(np.complex128)
            self.a = self.a.astype(np.complex128)
            self.left = self.left.astype(np.complex128)
            self.right = self.right.astype(np.complex128)

    def apply_rows(self, rows: slice, u: Matrix) -> None:
        """Replace rows ``rows`` of the pencil by ``u`` times them."""
        self._promote(u)
        self.e[rows, :] = u @ self.e[rows, :]
        self.a[rows, :] = u @ self.a[rows, :]
        self.left[rows, :] = u @ self.left[rows, :]

    def apply_cols(self, cols: slice, v: Matrix) -> None:
        """Replace columns ``cols`` of the pencil by them times ``v``."""
        self._promote(v)
        self.e[:, cols] = self.e[:, cols] @ v
        self.a[:, cols] = self.a[:, cols] @ v
        self.right[:, cols] = self.right[:, cols] @ v

    def _rank(self, s: np.ndarray) -> int:
        return int(np.sum(s > self.threshold))

    def reduce_right(
        self, r0: int, r1: int, c0: int, c1: int, swap: bool = False
    ) -> tuple[list[int], list[int], int, int]:
        """Extract right singular blocks and the zero eigenvalue into the leading corner
        of the block ``[r0:r1, c0:c1]``.

        With ``swap`` the roles of ``E`` and ``A`` are exchanged, which extracts the
        right singular blocks together with the infinite eigenvalue instead.

        Returns:
            ``(s, r, rows, cols)``: kernel dimensions ``s_j`` and ranks ``r_j`` per step
            and the size of the extracted leading block.
        """
        s_list: list[int] = []
        r_list: list[int] = []
        row, col = r0, c0
        while col < c1:
            a_role = self.e if swap else self.a
            _, sig, v = svd(a_role[row:r1, col:c1])
            rho = self._rank(sig)
            s = (c1 - col) - rho
            if s == 0:
                break
            self.apply_cols(slice(col, c1), np.concatenate([v[:, rho:], v[:, :rho]], axis=1))
            a_role = self.e if swap else self.a
            a_role[row:r1, col : col + s] = 0

            e_role = self.a if swap else self.e
            u1, sig1, v1 = svd(e_role[row:r1, col : col + s])
            r = self._rank(sig1)
            self.apply_cols(slice(col, col + s), v1)
            self.apply_rows(slice(row, r1), adjoint(u1))
            e_role = self.a if swap else self.e
            a_role = self.e if swap else self.a
            e_role[row + r : r1, col : col + s] = 0
            a_role[row:r1, col : col + s] = 0
            s_list.append(s)
            r_list.append(r)
            row += r
            col += s
        return s_list, r_list, row - r0, col - c0

    def reduce_left(
        self, r0: int, r1: int, c0: int, c1: int, swap: bool = False
    ) -> tuple[list[int], list[int], int, int]:
        """Mirror image of :meth:`reduce_right`: extract left singular blocks and the zero
        eigenvalue (infinite with ``swap``) into the trailing corner of the block."""
        t_list: list[int] = []
        q_list: list[int] = []
        row, col = r1, c1
        while row > r0:
            a_role = self.e if swap else self.a
            u, sig, _ = svd(a_role[r0:row, c0:col])
            rho = self._rank(sig)
            t = (row - r0) - rho
            if t == 0:
                break
            self.apply_rows(slice(r0, row), adjoint(u))
            a_role = self.e if swap else self.a
            a_role[row - t : row, c0:col] = 0

            e_role = self.a if swap else self.e
            u1, sig1, v1 = svd(e_role[row - t : row, c0:col])
            q = self._rank(sig1)
            width = col - c0
            self.apply_cols(
                slice(c0, col), np.concatenate([v1[:, q:], v1[:, :q]], axis=1)
            )
            self.apply_rows(slice(row - t, row), adjoint(u1))
            e_role = self.a if swap else self.e
            a_role = self.e if swap else self.a
            e_role[row - t : row, c0 : c0 + width - q] = 0
            a_role[row - t : row, c0:col] = 0
            t_list.append(t)
            q_list.append(q)
            row -= t
            col -= q
        return t_list, q_list, r1 - row, c1 - col


def _singular_indices(s: list[int], r: list[int]) -> list[int]:
    """Minimal indices: ``s_j - r_j`` blocks of index ``j`` (0-based)."""
    out: list[int] = []
    for j, (sj, rj) in enumerate(zip(s, r, strict=True)):
        out.extend([j] * max(sj - rj, 0))
    return out


def _jordan_sizes(s: list[int], r: list[int]) -> list[int]:
    """Jordan sizes: ``r_j - s_{j+1}`` blocks of size ``j + 1``."""
    out: list[int] = []
    for j, rj in enumerate(r):
        nxt = s[j + 1] if j + 1 < len(s) else 0
        count = rj - nxt
        if count < 0:
            logger.warning(f"staircase step {j}: rank sequence not monotone ({rj} < {nxt})")
        out.extend([j + 1] * max(count, 0))
    return out


def _check_pair(e: ArrayLike, a: ArrayLike) -> tuple[Matrix, Matrix]:
    em = as_matrix(e, "E")
    am = as_matrix(a, "A")
    if em.shape != am.shape:
        raise ShapeMismatch(f"E and A must have the same shape, got {em.shape} and {am.shape}")
    return em, am


def pencil_threshold(e: Matrix, a: Matrix, tol: Tolerance) -> float:
    """Pencil-global rank threshold."""
    return tol.threshold(norm2(e) + norm2(a), max(e.shape))


def decompose(
    e: ArrayLike, a: ArrayLike, tol: Tolerance = DEFAULT_TOLERANCE
) -> StaircaseDecomposition:
    """Five-block unitary staircase reduction of ``lambda E - A``."""
    em, am = _check_pair(e, a)
    n, m = em.shape
    ws = _Workspace(em, am, pencil_threshold(em, am, tol))

    # right singular part and zero eigenvalue, then split them apart
    s1, r1, rows_z, cols_z = ws.reduce_right(0, n, 0, m)
    right_indices = _singular_indices(s1, r1)
    zero_sizes = _jordan_sizes(s1, r1)
    _, _, rows_eps, cols_eps = ws.reduce_right(0, rows_z, 0, cols_z, swap=True)

    # left singular part and infinite eigenvalue, then split them apart
    s2, r2, rows_w, cols_w = ws.reduce_left(rows_z, n, cols_z, m, swap=True)
    left_indices = _singular_indices(s2, r2)
    infinite_sizes = _jordan_sizes(s2, r2)
    _, _, rows_eta, cols_eta = ws.reduce_left(n - rows_w, n, m - cols_w, m)

    row_splits = (0, rows_eps, rows_z, n - rows_w, n - rows_eta, n)
    col_splits = (0, cols_eps, cols_z, m - cols_w, m - cols_eta, m)
    expected_eps = (sum(right_indices), sum(i + 1 for i in right_indices))
    expected_eta = (sum(i + 1 for i in left_indices), sum(left_indices))
    if (rows_eps, cols_eps) != expected_eps or (rows_eta, cols_eta) != expected_eta:
        logger.warning(
            f"staircase geometry disagrees with the index counts: "
            f"right {(rows_eps, cols_eps)} vs {expected_eps}, "
            f"left {(rows_eta, cols_eta)} vs {expected_eta}"
        )
    logger.debug(
        f"staircase of {n}x{m} pencil: splits rows={row_splits} cols={col_splits}, "
        f"threshold={ws.threshold:.3e}"
    )
    return StaircaseDecomposition(
        e=ws.e,
        a=ws.a,
        left=ws.left,
        right=ws.right,
        row_splits=row_splits,
        col_splits=col_splits,
        right_indices=sorted_desc(right_indices),
        zero_sizes=sorted_desc(zero_sizes),
        infinite_sizes=sorted_desc(infinite_sizes),
        left_indices=sorted_desc(left_indices),
        threshold=ws.threshold,
    )


def _jordan_sizes_at(e: Matrix, a: Matrix, mu: complex, tol: Tolerance) -> list[int]:
    """Jordan sizes of the square regular pencil ``(e, a)`` at ``mu``."""
    shifted = a - mu * e
    scale = norm2(e) * (1.0 + abs(mu)) + norm2(a)
    ws = _Workspace(e, shifted, tol.threshold(scale, e.shape[0]))
    s, r, _, _ = ws.reduce_right(0, e.shape[0], 0, e.shape[1])
    return _jordan_sizes(s, r)


def _fit_sizes(sizes: list[int], total: int) -> list[int]:
    """Adjust Jordan sizes so they add up to ``total``."""
    sizes = sorted(sizes, reverse=True)
    while sum(sizes) > total and sizes:
        excess = sum(sizes) - total
        if sizes[-1] <= excess:
            sizes.pop()
        else:
            sizes[-1] -= excess
    sizes.extend([1] * (total - sum(sizes)))
    return sorted(sizes, reverse=True)


def _finite_nonzero(
    e: Matrix, a: Matrix, real: bool, tol: Tolerance
) -> list[FiniteEigenvalue]:
    """Cluster the eigenvalues of an invertible regular pair and find their Jordan sizes.

    Clusters start from computed eigenvalues within ``cluster * max(1, |lambda|_max)``.
    The multiplicity found by the staircase at the cluster mean decides how many of the
    nearest eigenvalues belong to it, which catches the wide spread of defective ones.
    """
    k = e.shape[0]
    if k == 0:
        return []
    values = list(sla.eigvals(a, e))
    radius = tol.cluster * max(1.0, max(abs(v) for v in values))
    remaining = sorted(values, key=lambda v: (v.real, v.imag))
    found: list[FiniteEigenvalue] = []
    while remaining:
        seed = remaining[0]
        members = [v for v in remaining if abs(v - seed) <= radius]
        mu = complex(np.mean(members))
        sizes = _jordan_sizes_at(e, a, mu, tol)
        mult = max(sum(sizes), len(members))
        mult = min(mult, len(remaining))
        members = sorted(remaining, key=lambda v: abs(v - mu))[:mult]
        mu = complex(np.mean(members))
        sizes = _fit_sizes(_jordan_sizes_at(e, a, mu, tol), len(members))
        if real and abs(mu.imag) <= radius:
            mu = complex(mu.real, 0.0)
        for v in members:
            remaining.remove(v)
        found.append(FiniteEigenvalue(mu, tuple(sizes)))
    found.sort(key=lambda ev: (abs(ev.value), ev.value.real, ev.value.imag))
    return found


def kronecker_structure(
    decomposition: StaircaseDecomposition, tol: Tolerance = DEFAULT_TOLERANCE
) -> KroneckerStructure:
    """Assemble the Kronecker invariants from a decomposition."""
    n, m = decomposition.e.shape
    rows, cols = decomposition.block(2)
    e_f = decomposition.e[rows, cols]
    a_f = decomposition.a[rows, cols]
    if e_f.shape[0] != e_f.shape[1]:
        raise DhPencilError(
            f"rank decisions produced a non-square regular block {e_f.shape}; "
            "try a different tolerance"
        )
    real = not np.iscomplexobj(decomposition.e)
    finite = _finite_nonzero(e_f, a_f, real, tol)
    if decomposition.zero_sizes:
        finite.insert(0, FiniteEigenvalue(0j, decomposition.zero_sizes))
    rank_from_left = n - len(decomposition.left_indices)
    rank_from_right = m - len(decomposition.right_indices)
    if rank_from_left != rank_from_right:
        logger.warning(
            f"normal rank inconsistent: n - #left = {rank_from_left}, "
            f"m - #right = {rank_from_right}"
        )
    return KroneckerStructure(
        shape=(n, m),
        finite_eigenvalues=tuple(finite),
        infinite_jordan_sizes=decomposition.infinite_sizes,
        right_minimal_indices=decomposition.right_indices,
        left_minimal_indices=decomposition.left_indices,
        normal_rank=min(rank_from_left, rank_from_right),
    )


def staircase(e: ArrayLike, a: ArrayLike, tol: Tolerance = DEFAULT_TOLERANCE) -> StaircaseForm:
    """Compute the Kronecker structure of ``lambda E - A`` by unitary staircase reduction.

    Args:
        e: Leading coefficient, n x m.
        a: Trailing coefficient, n x m.
        tol: Rank decision tolerance.

    Returns:
        Structure and the unitary transforms reaching the staircase form.

    Raises:
        ShapeMismatch: If ``E`` and ``A`` differ in shape.
    """
    dec = decompose(e, a, tol)
    return StaircaseForm(kronecker_structure(dec, tol), dec.left, dec.right)


def eigenvalues(
    e: ArrayLike, a: ArrayLike, tol: Tolerance = DEFAULT_TOLERANCE
) -> list[tuple[complex, int]]:
    """Eigenvalues of ``lambda E - A`` (infinity included) with algebraic multiplicities."""
    return staircase(e, a, tol).structure.eigenvalue_list()


def regular_part(e: ArrayLike, a: ArrayLike, tol: Tolerance = DEFAULT_TOLERANCE) -> RegularPart:
    """Square regular sub-pencil carrying every eigenvalue of ``lambda E - A``.

    Raises:
        DhPencilError: If inconsistent rank decisions give a non-square block.
    """
    dec = decompose(e, a, tol)
    rows, cols = dec.span(1, 3)
    e_r, a_r = dec.e[rows, cols], dec.a[rows, cols]
    if e_r.shape[0] != e_r.shape[1]:
        raise DhPencilError(f"regular part is not square: {e_r.shape}")
    return RegularPart(e_r.copy(), a_r.copy(), dec.left[rows, :].copy(), dec.right[:, cols].copy())


def reverse_pencil(e: ArrayLike, a: ArrayLike) -> tuple[Matrix, Matrix]:
    """``lambda A - E``: swaps zero and infinite eigenvalues, keeps minimal indices."""
    em, am = _check_pair(e, a)
    return am, em
