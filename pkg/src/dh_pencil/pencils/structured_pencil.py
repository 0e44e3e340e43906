"""Structured pencil model P(lambda) = lambda E - L Q with L = J - R."""

from dataclasses import dataclass
from dataclasses import field as dataclass_field
from functools import cached_property
from typing import Any

import numpy as np
from numpy.typing import ArrayLike

from ..core.errors import NonSquare, ShapeMismatch
from ..linalg.kernels import Field, Matrix, adjoint, as_matrix, field_of, norm2


def split_dissipative(L: ArrayLike) -> tuple[Matrix, Matrix]:
    """Split ``L`` uniquely into ``J - R`` with ``J`` skew and ``R`` Hermitian.

    Returns:
        ``(J, R)`` with ``J = (L - L*)/2`` and ``R = -(L + L*)/2``.

    Raises:
        NonSquare: If ``L`` is not square.
    """
    arr = as_matrix(L, "L")
    if arr.shape[0] != arr.shape[1]:
        raise NonSquare(f"L must be square, got shape {arr.shape}")
    lh = adjoint(arr)
    return (arr - lh) / 2, -(arr + lh) / 2


@dataclass(frozen=True, eq=False)
class StructuredPencil:
    """Pencil ``lambda E - L Q`` from a dissipative Hamiltonian descriptor system.

    ``E`` and ``Q`` are n x m, ``L`` is n x n and acts from the left on ``Q``. When ``L``
    is omitted it is the identity, so ``(E, Q)`` alone is the plain pencil ``lambda E - Q``.
    """

    E: Matrix
    Q: Matrix
    L: Matrix | None = None
    name: str = ""
    metadata: dict[str, Any] = dataclass_field(default_factory=dict)

    def __post_init__(self) -> None:
        e = as_matrix(self.E, "E")
        q = as_matrix(self.Q, "Q")
        if e.shape != q.shape:
            raise ShapeMismatch(f"E and Q must have the same shape, got {e.shape} and {q.shape}")
        n = e.shape[0]
        ell = np.eye(n, dtype=q.dtype) if self.L is None else as_matrix(self.L, "L")
        if ell.shape != (n, n):
            raise ShapeMismatch(f"L must be {n} x {n}, got {ell.shape}")
        object.__setattr__(self, "E", e)
        object.__setattr__(self, "Q", q)
        object.__setattr__(self, "L", ell)

    @classmethod
    def from_parts(
        cls,
        E: ArrayLike,
        Q: ArrayLike,
        J: ArrayLike | None = None,
        R: ArrayLike | None = None,
        name: str = "",
    ) -> "StructuredPencil":
        """Build a pencil from ``E``, ``Q`` and the two halves ``J``, ``R`` of ``L``."""
        q = as_matrix(Q, "Q")
        n = q.shape[0]
        j = np.zeros((n, n)) if J is None else as_matrix(J, "J")
        r = np.zeros((n, n)) if R is None else as_matrix(R, "R")
        return cls(E=as_matrix(E, "E"), Q=q, L=j - r, name=name)

    @classmethod
    def from_pair(cls, E: ArrayLike, A: ArrayLike, name: str = "") -> "StructuredPencil":
        """Wrap a plain pair ``lambda E - A`` as ``(E, Q=A, L=I)``.

        Only meaningful when the caller asserts that ``A`` itself plays the role of ``Q``.
        """
        return cls(E=as_matrix(E, "E"), Q=as_matrix(A, "A"), L=None, name=name)

    @property
    def shape(self) -> tuple[int, int]:
        return self.E.shape  # type: ignore[return-value]

    @property
    def field(self) -> Field:
        return field_of(self.E, self.Q, self.L)  # type: ignore[arg-type]

    @cached_property
    def J(self) -> Matrix:
        return split_dissipative(self.L)[0]

    @cached_property
    def R(self) -> Matrix:
        return split_dissipative(self.L)[1]

    @cached_property
    def A(self) -> Matrix:
        """Right-hand coefficient ``L Q``."""
        assert self.L is not None
        return self.L @ self.Q

    @property
    def scale(self) -> float:
        """Reference norm ``||E|| + ||LQ||`` for rank decisions."""
        return norm2(self.E) + norm2(self.A)

    def perturbed(
        self, delta_j: ArrayLike, delta_r: ArrayLike, s: complex = 1.0, t: complex = 1.0
    ) -> "StructuredPencil":
        """Return ``lambda E - (J + s dJ - R - t dR) Q``."""
        assert self.L is not None
        dj = as_matrix(delta_j, "delta_J")
        dr = as_matrix(delta_r, "delta_R")
        if dj.shape != self.L.shape or dr.shape != self.L.shape:
            raise ShapeMismatch("perturbations must have the shape of L")
        new_l = self.L + s * dj - t * dr
        return StructuredPencil(E=self.E, Q=self.Q, L=new_l, name=self.name)

    def adjoint_pencil(self) -> tuple[Matrix, Matrix]:
        """The pair ``(E*, (LQ)*)`` whose right structure is this pencil's left one."""
        return adjoint(self.E), adjoint(self.A)

    def __repr__(self) -> str:
        n, m = self.shape
        label = f" {self.name!r}" if self.name else ""
        return f"StructuredPencil{label}(n={n}, m={m}, field={self.field})"
