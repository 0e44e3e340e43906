"""Real diagonal forms of pairs ``(E, Q)`` with Hermitian ``E*Q``."""

import logging
from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.linalg as sla
from numpy.typing import ArrayLike, NDArray

from ..core.errors import (
    BothNonnegInfeasible,
    NonSquare,
    ShapeMismatch,
    SingularPencil,
    StructureViolated,
)
from ..linalg.kernels import (
    Matrix,
    adjoint,
    as_matrix,
    hermitian_part,
    is_psd,
    norm2,
    svd,
)
from ..linalg.tolerance import DEFAULT_TOLERANCE, Tolerance

logger = logging.getLogger(__name__)

Nonneg = Literal["E", "Q", "both"]


@dataclass(frozen=True, eq=False)
class DiagonalPairForm:
    """``U E X = D_E`` and ``U Q X = D_Q`` with real (rectangular) diagonal ``D_E``, ``D_Q``.

    ``U`` is unitary. ``X`` is invertible for regular pairs and unitary for pairs that
    satisfy both commutation conditions.
    """

    U: Matrix
    X: Matrix
    d_e: NDArray[np.float64]
    d_q: NDArray[np.float64]
    shape: tuple[int, int]

    @property
    def D_E(self) -> NDArray[np.float64]:
        return _rect_diag(self.d_e, self.shape)

    @property
    def D_Q(self) -> NDArray[np.float64]:
        return _rect_diag(self.d_q, self.shape)

    def residuals(self, e: ArrayLike, q: ArrayLike) -> tuple[float, float]:
        """``||U E X - D_E||`` and ``||U Q X - D_Q||``."""
        em, qm = as_matrix(e, "E"), as_matrix(q, "Q")
        return (
            norm2(self.U @ em @ self.X - self.D_E),
            norm2(self.U @ qm @ self.X - self.D_Q),
        )


def _rect_diag(d: NDArray[np.float64], shape: tuple[int, int]) -> NDArray[np.float64]:
    out = np.zeros(shape)
    k = d.size
    out[np.arange(k), np.arange(k)] = d
    return out


def hermitian_product_defect(e: Matrix, q: Matrix, tol: Tolerance) -> tuple[float, float]:
    """``||E*Q - Q*E||`` and the threshold it is compared against."""
    prod = adjoint(e) @ q
    return norm2(prod - adjoint(prod)), tol.threshold(norm2(e) * norm2(q), max(e.shape))


def _require_hermitian_product(e: Matrix, q: Matrix, tol: Tolerance) -> None:
    defect, threshold = hermitian_product_defect(e, q, tol)
    if defect > threshold:
        raise StructureViolated(f"E*Q is not Hermitian (||E*Q - Q*E|| = {defect:.3e})")


def _clusters(values: NDArray[np.float64], radius: float) -> list[NDArray[np.intp]]:
    """Group indices of sorted ``values`` whose consecutive gaps are within ``radius``."""
    if values.size == 0:
        return []
    groups: list[list[int]] = [[0]]
    for i in range(1, values.size):
        if abs(values[i] - values[i - 1]) <= radius:
            groups[-1].append(i)
        else:
            groups.append([i])
    return [np.array(g, dtype=np.intp) for g in groups]


def lagrangian_cs(
    z1: Matrix, z2: Matrix, tol: Tolerance
) -> tuple[Matrix, Matrix, NDArray[np.float64], NDArray[np.float64]]:
    """CS decomposition with a common left factor for a Lagrangian frame ``[Z1; Z2]``.

    Requires ``Z1* Z2`` Hermitian. Returns ``(U, V, c, s)`` with ``U Z1 V = diag(c)``,
    ``U Z2 V = diag(s)``, ``c >= 0`` and ``c**2 + s**2 = 1``.
    """
    n = z1.shape[0]
    u_svd, c, v = svd(z1)
    u = adjoint(u_svd)
    m = u @ z2 @ v
    s = np.zeros(n)
    radius = tol.cluster
    # c is descending; U Z2 V is block diagonal over clusters of equal c
    for group in _clusters(c, radius):
        block = m[np.ix_(group, group)]
        if float(np.mean(c[group])) > radius:
            w, rot = sla.eigh(hermitian_part(block))
            u[group, :] = adjoint(rot) @ u[group, :]
            v[:, group] = v[:, group] @ rot
            s[group] = w
        else:
            pu, sig, pv = svd(block)
            u[group, :] = adjoint(pu) @ u[group, :]
            v[:, group] = v[:, group] @ pv
            s[group] = sig
    return u, v, c, s


def _apply_nonneg(
    u: Matrix,
    c: NDArray[np.float64],
    s: NDArray[np.float64],
    nonneg: Nonneg,
    psd_product: bool,
    tiny: float,
) -> tuple[Matrix, NDArray[np.float64], NDArray[np.float64]]:
    """Row sign flips of ``U`` making ``c`` (``"E"``), ``s`` (``"Q"``) or both nonnegative."""
    if nonneg == "both" and not psd_product:
        raise BothNonnegInfeasible("both diagonals can be made nonnegative only if E*Q >= 0")
    if nonneg == "E":
        flip = c < 0
    elif nonneg == "Q":
        flip = s < 0
    else:
        flip = (c < 0) | ((np.abs(c) <= tiny) & (s < 0))
    sign = np.where(flip, -1.0, 1.0)
    c, s = c * sign, s * sign
    if nonneg == "both":
        s = np.where((s < 0) & (s > -tiny), 0.0, s)
    return u * sign[:, None], c, s


def diagonalize_regular_pair(
    e: ArrayLike,
    q: ArrayLike,
    tol: Tolerance = DEFAULT_TOLERANCE,
    nonneg: Nonneg = "E",
) -> DiagonalPairForm:
    """Diagonalize a regular square pair with ``E*Q = Q*E``.

    The columns of ``[E; Q]`` span a Lagrangian subspace; orthonormalizing them and taking
    a CS decomposition with a common left factor gives ``U E X = C`` and ``U Q X = S``
    with ``C**2 + S**2 = I``.

    Args:
        e: Square matrix.
        q: Square matrix of the same order.
        tol: Tolerance for the structure and regularity decisions.
        nonneg: Which diagonal to make nonnegative; ``"both"`` needs ``E*Q >= 0``.

    Raises:
        StructureViolated: If ``E*Q`` is not Hermitian.
        SingularPencil: If ``lambda E - Q`` is singular.
        BothNonnegInfeasible: If ``nonneg="both"`` but ``E*Q`` is indefinite.
    """
    em, qm = as_matrix(e, "E"), as_matrix(q, "Q")
    n = em.shape[0]
    if em.shape != (n, n) or qm.shape != (n, n):
        raise NonSquare(f"E and Q must be square of equal order, got {em.shape} and {qm.shape}")
    _require_hermitian_product(em, qm, tol)
    dtype = np.result_type(em, qm)
    if n == 0:
        empty = np.zeros((0, 0), dtype=dtype)
        return DiagonalPairForm(empty, empty, np.zeros(0), np.zeros(0), (0, 0))

    stacked = np.vstack([em, qm])
    z, t = sla.qr(stacked, mode="economic")
    diag_t = np.abs(np.diag(t))
    if np.min(sla.svdvals(t)) <= tol.threshold(norm2(stacked), 2 * n):
        raise SingularPencil("lambda E - Q is singular: [E; Q] is rank deficient")
    u, v, c, s = lagrangian_cs(z[:n], z[n:], tol)
    x = sla.solve_triangular(t, v)
    product = hermitian_part(adjoint(em) @ qm)
    u, c, s = _apply_nonneg(u, c, s, nonneg, is_psd(product, tol), tol.threshold(1.0, n))
    logger.debug(
        f"diagonalized regular pair of order {n}: min |diag R| = {np.min(diag_t):.3e}"
    )
    return DiagonalPairForm(u, x, c, s, (n, n))


def _joint_eigenspaces(
    family: list[Matrix], radius: float, rng: np.random.Generator
) -> list[Matrix]:
    """Orthonormal bases of the joint eigenspaces of commuting Hermitian matrices.

    A random positive combination separates the eigenspaces generically; clusters on
    which some member is not yet scalar are refined member by member.
    """
    dim = family[0].shape[0]
    weights = rng.uniform(0.5, 1.5, size=len(family))
    combo = sum((w * f for w, f in zip(weights, family, strict=True)), np.zeros_like(family[0]))
    values, vectors = sla.eigh(hermitian_part(combo))
    spaces = [vectors[:, g] for g in _clusters(values, radius)]
    for member in family:
        refined: list[Matrix] = []
        for basis in spaces:
            restricted = hermitian_part(adjoint(basis) @ member @ basis)
            w, rot = sla.eigh(restricted)
            if w.size > 1 and w[-1] - w[0] > radius:
                logger.debug(f"refining joint eigenspace of dimension {w.size}")
                refined.extend(basis @ rot[:, g] for g in _clusters(w, radius))
            else:
                refined.append(basis)
        spaces = refined
    assert sum(b.shape[1] for b in spaces) == dim
    return spaces


def diagonalize_commuting_pair(
    e: ArrayLike,
    q: ArrayLike,
    tol: Tolerance = DEFAULT_TOLERANCE,
    nonneg: Nonneg = "E",
    seed: int = 0,
) -> DiagonalPairForm:
    """Unitary diagonalization ``U E V``, ``U Q V`` of a rectangular pair with both
    ``E*Q = Q*E`` and ``E Q* = Q E*``.

    ``E*E``, ``Q*Q`` and ``E*Q`` then commute; ``V`` collects their joint eigenvectors and
    the rows of ``U`` are the normalized images under ``E`` (or ``Q`` where ``E`` vanishes).

    Raises:
        StructureViolated: If either commutation condition fails.
        BothNonnegInfeasible: If ``nonneg="both"`` but ``E*Q`` is indefinite.
    """
    em, qm = as_matrix(e, "E"), as_matrix(q, "Q")
    if em.shape != qm.shape:
        raise ShapeMismatch(f"E and Q must have the same shape, got {em.shape} and {qm.shape}")
    n, m = em.shape
    _require_hermitian_product(em, qm, tol)
    _require_hermitian_product(adjoint(em), adjoint(qm), tol)
    dtype = np.result_type(em, qm, np.float64)
    scale = max(norm2(em), norm2(qm), 1.0) ** 2
    radius = tol.cluster * scale
    floor = tol.threshold(scale, max(n, m))

    family = [adjoint(em) @ em, adjoint(qm) @ qm, adjoint(em) @ qm]
    spaces = _joint_eigenspaces(family, radius, np.random.default_rng(seed)) if m else []

    rows: list[Matrix] = []
    cols: list[Matrix] = []
    null_cols: list[Matrix] = []
    d_e: list[float] = []
    d_q: list[float] = []
    for basis in spaces:
        k = basis.shape[1]
        alpha = float(np.real(np.trace(adjoint(basis) @ family[0] @ basis))) / k
        beta = float(np.real(np.trace(adjoint(basis) @ family[1] @ basis))) / k
        mu = float(np.real(np.trace(adjoint(basis) @ family[2] @ basis))) / k
        if alpha > floor:
            rows.append(em @ basis / np.sqrt(alpha))
            d_e.extend([np.sqrt(alpha)] * k)
            d_q.extend([mu / np.sqrt(alpha)] * k)
        elif beta > floor:
            rows.append(qm @ basis / np.sqrt(beta))
            d_e.extend([0.0] * k)
            d_q.extend([np.sqrt(beta)] * k)
        else:
            null_cols.append(basis)
            continue
        cols.append(basis)

    images = np.hstack(rows) if rows else np.zeros((n, 0), dtype=dtype)
    complement = _orthogonal_complement(images)
    u = adjoint(np.hstack([images, complement]).astype(dtype))
    v = np.hstack(cols + null_cols).astype(dtype) if m else np.zeros((0, 0), dtype=dtype)
    c, s = np.array(d_e), np.array(d_q)
    product = hermitian_part(adjoint(em) @ qm)
    u_top, c, s = _apply_nonneg(
        u[: c.size], c, s, nonneg, is_psd(product, tol), tol.threshold(1.0, max(n, m))
    )
    u[: c.size] = u_top
    logger.debug(f"diagonalized {n}x{m} commuting pair: {c.size} nonzero diagonal entries")
    return DiagonalPairForm(u, v, c, s, (n, m))


def _orthogonal_complement(basis: Matrix) -> Matrix:
    """Orthonormal basis of the complement of orthonormal columns."""
    n = basis.shape[0]
    if basis.shape[1] == 0:
        return np.eye(n, dtype=basis.dtype)
    q, _ = sla.qr(basis, mode="full")
    return q[:, basis.shape[1] :]
