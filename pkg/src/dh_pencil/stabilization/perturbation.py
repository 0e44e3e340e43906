"""Structured perturbations making the zero eigenvalue semisimple."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np
from numpy.typing import ArrayLike

from ..core.errors import (
    InvalidInput,
    RangeConditionViolated,
    ShapeMismatch,
    SymmetricModeInfeasible,
)
from ..kronecker.staircase import staircase
from ..kronecker.structure import KroneckerStructure
from ..linalg.kernels import (
    Matrix,
    adjoint,
    as_matrix,
    fro,
    hermitian_part,
    kernel_basis,
    maybe_real,
    min_eigenvalue,
    norm2,
    range_projector,
)
from ..linalg.tolerance import DEFAULT_TOLERANCE, Tolerance
from ..pencils.structured_pencil import StructuredPencil
from ..stability.dh_analysis import spectral_scale
from .completion import min_norm_annihilator, psd_completion
from .zero_form import ZeroForm, zero_condensed_form

logger = logging.getLogger(__name__)

Mode = Literal["skew_only", "mixed", "symmetric_only"]
Preset = Literal["zero", "symmetric_only"]

SWEEP_VALUES: tuple[float, ...] = (0.0, 0.5, 1.0, 2.0)


@dataclass(frozen=True, eq=False)
class StabilizingPerturbation:
    """``dJ`` (skew) and ``dR`` (Hermitian) making zero semisimple, with bounds and checks.

    ``bound_R`` bounds ``||dR||`` and ``bound_J`` bounds ``||dJ||_F``; ``bound_J_q_free``
    is the same estimate with the projector replaced by one that needs only ``L``.
    ``sweep`` maps ``(s, t)`` to whether ``lambda E - (J + s dJ - R - t dR) Q`` kept the
    nonzero and infinite structure of the original pencil.
    """

    delta_J: Matrix
    delta_R: Matrix
    bound_R: float
    bound_J: float
    bound_J_q_free: float
    mode: Mode
    Y: Matrix
    Z: Matrix
    W: Matrix
    alpha: float
    form: ZeroForm
    perturbed: StructuredPencil
    zero_sizes_after: tuple[int, ...]
    checks: dict[str, bool] = field(default_factory=dict)
    sweep: dict[tuple[float, float], bool] = field(default_factory=dict)

    @property
    def norm_R(self) -> float:
        return norm2(self.delta_R)

    @property
    def norm_J(self) -> float:
        return fro(self.delta_J)

    @property
    def sweep_ok(self) -> bool:
        return all(self.sweep.values())

    @property
    def verified(self) -> bool:
        return all(self.checks.values()) and self.sweep_ok

    def to_dict(self) -> dict[str, Any]:
        return {
            "mode": self.mode,
            "partition": list(self.form.partition),
            "norm_delta_R": self.norm_R,
            "norm_delta_J_fro": self.norm_J,
            "bound_R": self.bound_R,
            "bound_J": self.bound_J,
            "bound_J_q_free": self.bound_J_q_free,
            "alpha": self.alpha,
            "zero_jordan_sizes_after": list(self.zero_sizes_after),
            "checks": dict(self.checks),
            "sweep": [
                {"s": s, "t": t, "ok": ok} for (s, t), ok in sorted(self.sweep.items())
            ],
            "verified": self.verified,
        }


def _inverse_norms(r0: Matrix, tol: Tolerance) -> tuple[float, float]:
    """``||(R0|im R0)^-1||`` and its square root; zero when ``R0`` vanishes."""
    if r0.size == 0:
        return 0.0, 0.0
    w = np.linalg.eigvalsh(hermitian_part(r0))
    positive = w[w > tol.threshold(max(norm2(r0), 1.0), r0.shape[0])]
    if positive.size == 0:
        return 0.0, 0.0
    inv = 1.0 / float(np.min(positive))
    return inv, inv**0.5


def _choose_y(
    form: ZeroForm, y: Preset | ArrayLike, r0: Matrix, tol: Tolerance
) -> tuple[Matrix, Mode]:
    n3 = form.partition[2]
    others = form.complement_of_block3()
    if isinstance(y, str):
        if y == "zero":
            return np.zeros((n3, others.size), dtype=form.L.dtype), "skew_only"
        if y == "symmetric_only":
            l3 = form.L[form.slice_of(3), :]
            q2 = form.Q[:, form.slice_of(2)]
            y_sym = (l3 @ range_projector(q2, tol))[:, others] if q2.size else np.zeros(
                (n3, others.size), dtype=l3.dtype
            )
            outside = 0.0
            if others.size:
                outside = norm2((np.eye(others.size) - range_projector(r0, tol)) @ adjoint(y_sym))
            if outside > tol.threshold(max(norm2(y_sym), 1.0), form.n):
                raise SymmetricModeInfeasible(
                    f"L3 P does not lie in the range of R: defect {outside:.3e}"
                )
            return y_sym, "symmetric_only"
        raise InvalidInput(f"unknown perturbation preset {y!r}")
    ym = as_matrix(y, "Y")
    if ym.shape != (n3, others.size):
        raise ShapeMismatch(f"Y must be {n3} x {others.size}, got {ym.shape}")
    return ym, "mixed"


def _structure_of(pencil: StructuredPencil, tol: Tolerance) -> KroneckerStructure:
    return staircase(pencil.E, pencil.A, tol).structure


def _sweep(
    pencil: StructuredPencil,
    delta_j: Matrix,
    delta_r: Matrix,
    reference: KroneckerStructure,
    tol: Tolerance,
    workers: int,
) -> dict[tuple[float, float], bool]:
    atol = tol.cluster * spectral_scale(reference)
    grid = [(s, t) for s in SWEEP_VALUES for t in SWEEP_VALUES]

    def run(point: tuple[float, float]) -> bool:
        s, t = point
        structure = _structure_of(pencil.perturbed(delta_j, delta_r, s, t), tol)
        return structure.is_regular and reference.matches_nonzero(structure, atol)

    with ThreadPoolExecutor(max_workers=max(workers, 1)) as executor:
        outcomes = list(executor.map(run, grid))
    failed = [p for p, ok in zip(grid, outcomes, strict=True) if not ok]
    if failed:
        logger.warning(f"{pencil!r}: structure changed along the sweep at {failed}")
    return dict(zip(grid, outcomes, strict=True))


def stabilize(
    pencil: StructuredPencil,
    y: Preset | ArrayLike = "zero",
    tol: Tolerance = DEFAULT_TOLERANCE,
    workers: int = 4,
) -> StabilizingPerturbation:
    """Make the zero eigenvalue of a regular index-one pencil semisimple.

    In the coordinates of :func:`zero_condensed_form`, with blocks 3 and 4 swapped so that
    ``U R U* = [[R0, C*], [C, D]]`` isolates the ``E = I, Q = 0`` block,
    ``dR = [[0, Y*], [Y, W]]`` comes from :func:`psd_completion` and ``dJ`` carries
    ``Z`` and ``-Z*`` in block row and column 3, where ``Z*`` is the smallest correction
    with ``Q2* (L3 - Y + Z)* = 0``. Then ``A32`` of the perturbed pencil vanishes, the
    nonzero and infinite structure is untouched for every scaling ``(s, t)``, and ``R + dR``
    stays positive semidefinite.

    Args:
        pencil: Square pencil with ``E*Q = Q*E >= 0``, ``R >= 0``, index at most one.
        y: ``"zero"`` (``dR = 0``, mode ``skew_only``), ``"symmetric_only"`` or an
            explicit ``Y`` of shape ``n3 x (n1 + n2 + n4)`` with ``im Y*`` inside ``im R0``.
        tol: Tolerance settings.
        workers: Threads used for the ``(s, t)`` sweep.

    Raises:
        StructureViolated: If the structural hypotheses fail.
        SingularPencil: If the pencil is singular.
        IndexTooHigh: If the index exceeds one.
        RangeConditionViolated: If an explicit ``Y`` violates the range condition.
        SymmetricModeInfeasible: If the symmetric preset violates it.
    """
    form = zero_condensed_form(pencil, tol)
    n = form.n
    third = form.slice_of(3)
    others = form.complement_of_block3()
    r_t = hermitian_part(form.R)
    r0 = r_t[np.ix_(others, others)]
    c = r_t[third, :][:, others]
    d = r_t[third, third]

    y_mat, mode = _choose_y(form, y, r0, tol)
    try:
        w, alpha = psd_completion(r0, d, c, y_mat, tol)
    except RangeConditionViolated as e:
        if mode == "symmetric_only":
            raise SymmetricModeInfeasible(str(e)) from e
        raise

    dtype = np.result_type(form.L, y_mat, w)
    delta_r_t = np.zeros((n, n), dtype=dtype)
    delta_r_t[third, others] = y_mat
    delta_r_t[others[:, None], np.arange(third.start, third.stop)] = adjoint(y_mat)
    delta_r_t[third, third] = w

    l3 = form.L[third, :]
    y_hat = np.zeros((l3.shape[0], n), dtype=dtype)
    y_hat[:, others] = y_mat
    q2 = form.Q[:, form.slice_of(2)]
    target = adjoint(l3 - y_hat)
    z = adjoint(min_norm_annihilator(adjoint(q2), target, tol)) if q2.size else np.zeros_like(
        y_hat
    )
    z[:, third] = 0
    if fro(z) <= tol.threshold(max(norm2(form.L), 1.0), n):
        z = np.zeros_like(z)
    delta_j_t = np.zeros((n, n), dtype=np.result_type(dtype, z))
    delta_j_t[third, :] = z
    delta_j_t[:, third] = -adjoint(z)
    delta_j_t[third, third] = 0

    u, u_h = form.U, adjoint(form.U)
    thr = tol.threshold(max(norm2(form.L), 1.0), n)
    delta_j = u_h @ delta_j_t @ u
    delta_j = (delta_j - adjoint(delta_j)) / 2
    delta_r = hermitian_part(u_h @ delta_r_t @ u)
    if np.iscomplexobj(delta_j) and pencil.field == "real":
        delta_j = maybe_real(delta_j, thr)
        delta_r = maybe_real(delta_r, thr)

    y_norm = norm2(y_mat)
    inv, inv_half = _inverse_norms(r0, tol)
    bound_r = 2 * y_norm + (inv * y_norm + 2 * inv_half * y_norm**0.5) * (norm2(d) + y_norm)
    bound_j = 2 * fro(range_projector(q2, tol) @ target) if q2.size else 0.0
    lead = np.r_[0 : form.partition[0] + form.partition[1]]
    coupling = form.L[np.ix_(lead, others)]
    if coupling.size:
        basis = kernel_basis(coupling, tol)
        free = np.zeros((n, basis.shape[1]), dtype=basis.dtype)
        free[others] = basis
        bound_j_free = 2 * fro(free @ adjoint(free) @ target)
    else:
        bound_j_free = 2 * fro(target[others])

    perturbed = pencil.perturbed(delta_j, delta_r)
    before = _structure_of(pencil, tol)
    after = _structure_of(perturbed, tol)
    total_r = hermitian_part(pencil.R + delta_r)
    r_scale = max(norm2(pencil.R) + norm2(delta_r), 1.0)
    a32_after = norm2(
        (form.U @ perturbed.A @ form.X)[third, form.slice_of(2)]
    )
    slack = tol.threshold(1.0, n) ** 0.5
    checks = {
        "r_psd": min_eigenvalue(total_r, tol) >= -tol.threshold(r_scale, n),
        "a32_zero": a32_after <= slack * max(norm2(form.E) + norm2(form.A), 1.0),
        "zero_semisimple": all(size == 1 for size in after.zero_jordan_sizes),
        "nonzero_preserved": after.is_regular
        and before.matches_nonzero(after, tol.cluster * spectral_scale(before)),
        "bound_R": norm2(delta_r) <= bound_r * (1 + slack) + slack,
        "bound_J": fro(delta_j) <= bound_j * (1 + slack) + slack,
    }
    sweep = _sweep(pencil, delta_j, delta_r, before, tol, workers)
    if not all(checks.values()):
        failed = [key for key, ok in checks.items() if not ok]
        logger.warning(f"{pencil!r}: stabilizing perturbation failed checks {failed}")
    logger.info(
        f"{pencil!r}: {mode} perturbation, ||dR|| = {norm2(delta_r):.3e}, "
        f"||dJ||_F = {fro(delta_j):.3e}, zero sizes {before.zero_jordan_sizes} -> "
        f"{after.zero_jordan_sizes}"
    )
    return StabilizingPerturbation(
        delta_J=delta_j,
        delta_R=delta_r,
        bound_R=bound_r,
        bound_J=bound_j,
        bound_J_q_free=bound_j_free,
        mode=mode,
        Y=y_mat,
        Z=z,
        W=w,
        alpha=alpha,
        form=form,
        perturbed=perturbed,
        zero_sizes_after=after.zero_jordan_sizes,
        checks=checks,
        sweep=sweep,
    )
