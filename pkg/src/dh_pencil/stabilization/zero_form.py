"""Condensed form exposing the Jordan structure of the eigenvalue zero.

For a regular pencil ``lambda E - L Q`` of index at most one with ``E*Q = Q*E >= 0`` and
``L + L* <= 0`` a unitary ``U`` and an invertible ``X`` give, in blocks of sizes
``(n1, n2, n3, n4)``::

    U Q X = [[Q11, Q12, 0, 0],   U E X = [[E11, 0,   0, 0],   U L Q X = [[A11, 0,   0, A14],
             [Q21, Q22, 0, 0],            [E21, E22, 0, 0],               [A21, 0,   0, A24],
             [0,   0,   0, 0],            [0,   0,   I, 0],               [A31, A32, 0, A34],
             [Q41, Q42, 0, I]]            [0,   0,   0, 0]]               [0,   0,   0, A44]]

with lower triangular invertible ``E11``, ``E22``, ``A11``, invertible ``A44`` and
invertible leading 2 x 2 block of ``U Q X``. Zero is semisimple exactly when ``A32 = 0``.
"""

import logging
from dataclasses import dataclass
from typing import Any, Literal

import numpy as np
import scipy.linalg as sla

from ..core.errors import IndexTooHigh, NonSquare, SingularPencil, StructureViolated
from ..forms.diagonal_forms import diagonalize_regular_pair
from ..kronecker.staircase import staircase
from ..linalg.kernels import Matrix, adjoint, block_diag, norm2, ordered_schur_zero_trailing
from ..linalg.tolerance import DEFAULT_TOLERANCE, Tolerance
from ..pencils.structure_check import check_structure
from ..pencils.structured_pencil import StructuredPencil

logger = logging.getLogger(__name__)

Coefficient = Literal["E", "Q", "L", "A"]

# (row block, column block) pairs that vanish, 1-based
_ZERO_BLOCKS: dict[str, tuple[tuple[int, int], ...]] = {
    "E": ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 1), (3, 2), (3, 4),
          (4, 1), (4, 2), (4, 3), (4, 4)),
    "Q": ((1, 3), (1, 4), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (3, 4), (4, 3)),
    "A": ((1, 2), (1, 3), (2, 2), (2, 3), (3, 3), (4, 1), (4, 2), (4, 3)),
}
_LOWER_BLOCKS: dict[str, tuple[int, ...]] = {"E": (1, 2), "Q": (), "A": (1,)}


@dataclass(frozen=True, eq=False)
class ZeroForm:
    """``U``, ``X``, the partition and the transformed coefficients of a pencil.

    ``E``, ``Q`` and ``A`` are ``U E X``, ``U Q X`` and ``U L Q X`` with the zero pattern
    imposed; ``L`` is ``U L U*``. ``pattern_defect`` is the largest entry that was
    discarded to impose it.
    """

    U: Matrix
    X: Matrix
    partition: tuple[int, int, int, int]
    E: Matrix
    Q: Matrix
    L: Matrix
    A: Matrix
    pencil: StructuredPencil
    pattern_defect: float = 0.0

    @property
    def n(self) -> int:
        return sum(self.partition)

    def slice_of(self, i: int) -> slice:
        """Index range of block ``i`` (1-based)."""
        start = sum(self.partition[: i - 1])
        return slice(start, start + self.partition[i - 1])

    def block(self, name: Coefficient, i: int, j: int) -> Matrix:
        """Block ``(i, j)`` (1-based) of one transformed coefficient."""
        matrix = {"E": self.E, "Q": self.Q, "L": self.L, "A": self.A}[name]
        return matrix[self.slice_of(i), self.slice_of(j)]

    @property
    def R(self) -> Matrix:
        """``U R U*``."""
        return -(self.L + adjoint(self.L)) / 2

    def complement_of_block3(self) -> np.ndarray:
        """Indices of blocks 1, 2 and 4, the order used once blocks 3 and 4 are swapped."""
        third = self.slice_of(3)
        return np.r_[0 : third.start, third.stop : self.n]

    def round_trip_residuals(self) -> dict[str, float]:
        """Distances between the stored blocks and the products they came from."""
        p = self.pencil
        assert p.L is not None
        u_h = adjoint(self.U)
        return {
            "E": norm2(self.U @ p.E @ self.X - self.E),
            "Q": norm2(self.U @ p.Q @ self.X - self.Q),
            "L": norm2(self.U @ p.L @ u_h - self.L),
            "A": norm2(self.U @ p.A @ self.X - self.A),
        }

    def to_dict(self) -> dict[str, Any]:
        return {
            "partition": list(self.partition),
            "pattern_defect": self.pattern_defect,
            "a32_norm": norm2(self.block("A", 3, 2)),
        }


def _impose_pattern(form_blocks: dict[str, Matrix], partition: tuple[int, ...]) -> float:
    """Zero the prescribed blocks in place; returns the largest discarded magnitude."""
    bounds = np.cumsum((0,) + tuple(partition))

    def cut(i: int) -> slice:
        return slice(int(bounds[i - 1]), int(bounds[i]))

    defect = 0.0
    for name, blocks in _ZERO_BLOCKS.items():
        m = form_blocks[name]
        for i, j in blocks:
            b = m[cut(i), cut(j)]
            if b.size:
                defect = max(defect, float(np.max(np.abs(b))))
                m[cut(i), cut(j)] = 0
        for i in _LOWER_BLOCKS[name]:
            b = m[cut(i), cut(i)]
            if b.size:
                upper = np.triu(b, 1)
                defect = max(defect, float(np.max(np.abs(upper))))
                m[cut(i), cut(i)] = np.tril(b)
    return defect


def _check_hypotheses(pencil: StructuredPencil, tol: Tolerance) -> None:
    n, m = pencil.shape
    if n != m:
        raise NonSquare(f"the zero condensed form needs a square pencil, got {n} x {m}")
    report = check_structure(pencil, tol)
    if not report.dh_hypotheses:
        raise StructureViolated(
            f"E*Q = Q*E >= 0 and R >= 0 are required, failed: {report.failures()}"
        )
    structure = staircase(pencil.E, pencil.A, tol).structure
    if not structure.is_regular:
        raise SingularPencil(f"{pencil!r} is singular")
    if structure.index > 1:
        raise IndexTooHigh(structure.index)


def zero_condensed_form(
    pencil: StructuredPencil, tol: Tolerance = DEFAULT_TOLERANCE
) -> ZeroForm:
    """Compute the zero condensed form of a regular index-one dissipative pencil.

    ``lambda E - Q`` is brought to ``diag(Q1, 0, I)``, ``diag(I, I, 0)`` with ``Q1``
    positive diagonal. Eliminating the coupling of the ``E = 0`` block through its
    invertible diagonal block of ``L`` leaves ``lambda I - B Q1`` on the leading block,
    whose zero eigenvalue is semisimple; an ordered Schur form of ``B Q1`` moves it to
    the trailing ``n2`` columns.

    Raises:
        NonSquare: If the pencil is rectangular.
        StructureViolated: If ``E*Q = Q*E >= 0`` or ``R >= 0`` fails.
        SingularPencil: If the pencil is singular.
        IndexTooHigh: If the index exceeds one.
    """
    _check_hypotheses(pencil, tol)
    assert pencil.L is not None
    e, q, ell = pencil.E, pencil.Q, pencil.L
    n = e.shape[0]

    diag = diagonalize_regular_pair(e, q, tol, nonneg="both")
    c, s = diag.d_e, diag.d_q
    tiny = tol.threshold(1.0, n)
    kind = np.where(s <= tiny, 1, np.where(c <= tiny, 2, 0))
    order = np.concatenate([np.flatnonzero(kind == t) for t in (0, 1, 2)])
    k, n3 = int(np.sum(kind == 0)), int(np.sum(kind == 1))
    n4 = n - k - n3
    col_scale = np.where(kind == 2, 1.0 / np.maximum(s, tiny), 1.0 / np.maximum(c, tiny))
    u = diag.U[order, :]
    x = diag.X[:, order] * col_scale[order]
    q1 = (s / np.maximum(c, tiny))[order][:k]

    l_hat = u @ ell @ adjoint(u)
    lead, last = slice(0, k), slice(k + n3, n)
    l44 = l_hat[last, last]
    if n4:
        smallest = float(np.min(sla.svdvals(l44)))
        if smallest <= tol.threshold(max(norm2(l_hat), 1.0), n):
            raise IndexTooHigh(2)
    g = np.linalg.solve(l44, l_hat[last, lead]) if n4 else np.zeros((0, k))
    t = np.eye(n, dtype=np.result_type(x, g))
    t[last, lead] = -g * q1
    b = l_hat[lead, lead] - l_hat[lead, last] @ g

    w, lower, n2 = ordered_schur_zero_trailing(b * q1, tol)
    n1 = k - n2
    if n2:
        tail = lower[:, n1:]
        if norm2(tail) > tol.threshold(max(norm2(lower), 1.0), k) ** 0.5:
            logger.warning(f"zero block of the reduced pencil is not semisimple: {norm2(tail):.3e}")
    w_full = block_diag(w, np.eye(n3), np.eye(n4)).astype(np.result_type(w, u))
    u_t = adjoint(w_full) @ u
    x_t = x @ t @ w_full

    blocks = {
        "E": u_t @ e @ x_t,
        "Q": u_t @ q @ x_t,
        "A": u_t @ pencil.A @ x_t,
    }
    partition = (n1, n2, n3, n4)
    defect = _impose_pattern(blocks, partition)
    scale = max(norm2(blocks["E"]) + norm2(blocks["A"]) + norm2(blocks["Q"]), 1.0)
    if defect > tol.threshold(scale, n) ** 0.5:
        logger.warning(f"zero condensed form: discarded entries up to {defect:.3e}")
    logger.debug(f"zero condensed form of order {n}: partition {partition}")
    return ZeroForm(
        U=u_t,
        X=x_t,
        partition=partition,
        E=blocks["E"],
        Q=blocks["Q"],
        L=u_t @ ell @ adjoint(u_t),
        A=blocks["A"],
        pencil=pencil,
        pattern_defect=defect,
    )


@dataclass(frozen=True)
class ZeroSemisimpleReport:
    """Three equivalent tests for a semisimple zero eigenvalue.

    ``semisimple`` tests ``A32 = 0``, ``kernel_condition`` tests that block row 3 of
    ``U L U*`` annihilates block column 2 of ``U Q X``, and ``staircase_semisimple`` reads
    the Jordan sizes at zero from the staircase of the original pencil.
    """

    semisimple: bool
    a32_norm: float
    kernel_condition: bool
    l3q2_norm: float
    staircase_semisimple: bool
    zero_jordan_sizes: tuple[int, ...]

    @property
    def agree(self) -> bool:
        return self.semisimple == self.kernel_condition == self.staircase_semisimple

    def to_dict(self) -> dict[str, Any]:
        return {
            "semisimple": self.semisimple,
            "a32_norm": self.a32_norm,
            "kernel_condition": self.kernel_condition,
            "l3q2_norm": self.l3q2_norm,
            "staircase_semisimple": self.staircase_semisimple,
            "zero_jordan_sizes": list(self.zero_jordan_sizes),
            "agree": self.agree,
        }


def zero_semisimple_test(form: ZeroForm, tol: Tolerance = DEFAULT_TOLERANCE) -> ZeroSemisimpleReport:
    """Decide whether zero is a semisimple eigenvalue from a zero condensed form."""
    n = form.n
    a32 = norm2(form.block("A", 3, 2))
    a_scale = max(norm2(form.E) + norm2(form.A), 1.0)
    l3 = form.L[form.slice_of(3), :]
    q2 = form.Q[:, form.slice_of(2)]
    l3q2 = norm2(l3 @ q2) if l3.size and q2.size else 0.0
    lq_scale = max(norm2(form.L) * norm2(form.Q), 1.0)
    sizes = staircase(form.pencil.E, form.pencil.A, tol).structure.zero_jordan_sizes
    report = ZeroSemisimpleReport(
        semisimple=a32 <= tol.threshold(a_scale, n),
        a32_norm=a32,
        kernel_condition=l3q2 <= tol.threshold(lq_scale, n),
        l3q2_norm=l3q2,
        staircase_semisimple=all(size == 1 for size in sizes),
        zero_jordan_sizes=sizes,
    )
    if not report.agree:
        logger.warning(
            f"semisimplicity tests disagree: A32 {a32:.3e}, L3 Q2 {l3q2:.3e}, sizes {sizes}"
        )
    return report
