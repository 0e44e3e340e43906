"""Kronecker invariants of a pencil and regular deflating bases."""

import cmath
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..linalg.kernels import Matrix, norm2

INFINITE_EIGENVALUE = complex(math.inf, 0.0)


def is_infinite(value: complex) -> bool:
    """True for the eigenvalue infinity."""
    return cmath.isinf(value)


def encode_eigenvalue(value: complex) -> list[float] | str:
    """JSON form: ``[re, im]`` or ``"inf"``."""
    if is_infinite(value):
        return "inf"
    return [float(value.real), float(value.imag)]


def decode_eigenvalue(data: list[float] | str) -> complex:
    if data == "inf":
        return INFINITE_EIGENVALUE
    re, im = data  # type: ignore[misc]
    return complex(float(re), float(im))


@dataclass(frozen=True)
class FiniteEigenvalue:
    """A finite eigenvalue with the sizes of its Jordan blocks (descending)."""

    value: complex
    jordan_sizes: tuple[int, ...]

    @property
    def algebraic_multiplicity(self) -> int:
        return sum(self.jordan_sizes)

    @property
    def geometric_multiplicity(self) -> int:
        return len(self.jordan_sizes)

    @property
    def semisimple(self) -> bool:
        return all(size == 1 for size in self.jordan_sizes)


@dataclass(frozen=True)
class KroneckerStructure:
    """Complete Kronecker data of an n x m pencil ``lambda E - A``.

    Minimal index and Jordan size lists are sorted descending so that two structures
    compare equal exactly when their invariants agree.
    """

    shape: tuple[int, int]
    finite_eigenvalues: tuple[FiniteEigenvalue, ...] = ()
    infinite_jordan_sizes: tuple[int, ...] = ()
    right_minimal_indices: tuple[int, ...] = ()
    left_minimal_indices: tuple[int, ...] = ()
    normal_rank: int = 0

    @property
    def index(self) -> int:
        """Size of the largest infinite Jordan block, 0 without infinite eigenvalues."""
        return max(self.infinite_jordan_sizes, default=0)

    @property
    def is_regular(self) -> bool:
        n, m = self.shape
        return n == m and not self.right_minimal_indices and not self.left_minimal_indices

    @property
    def zero_jordan_sizes(self) -> tuple[int, ...]:
        for ev in self.finite_eigenvalues:
            if ev.value == 0:
                return ev.jordan_sizes
        return ()

    @property
    def regular_size(self) -> int:
        """Dimension of the regular part (all finite and infinite Jordan blocks)."""
        return sum(ev.algebraic_multiplicity for ev in self.finite_eigenvalues) + sum(
            self.infinite_jordan_sizes
        )

    def block_dimensions(self) -> tuple[int, int]:
        """Rows and columns covered by all Kronecker blocks."""
        reg = self.regular_size
        rows = reg + sum(self.right_minimal_indices) + sum(e + 1 for e in self.left_minimal_indices)
        cols = reg + sum(e + 1 for e in self.right_minimal_indices) + sum(self.left_minimal_indices)
        return rows, cols

    def eigenvalue_list(self) -> list[tuple[complex, int]]:
        """Eigenvalues with algebraic multiplicities, infinity last."""
        items = [(ev.value, ev.algebraic_multiplicity) for ev in self.finite_eigenvalues]
        if self.infinite_jordan_sizes:
            items.append((INFINITE_EIGENVALUE, sum(self.infinite_jordan_sizes)))
        return items

    def nonzero_part(self) -> tuple[tuple[FiniteEigenvalue, ...], tuple[int, ...]]:
        """Nonzero finite eigenvalues and infinite sizes (the part perturbations must keep)."""
        return (
            tuple(ev for ev in self.finite_eigenvalues if ev.value != 0),
            self.infinite_jordan_sizes,
        )

    def matches_nonzero(self, other: "KroneckerStructure", atol: float) -> bool:
        """Compare nonzero finite eigenvalues (values within ``atol``, exact Jordan sizes)
        and the infinite structure."""
        mine, inf_mine = self.nonzero_part()
        theirs, inf_theirs = other.nonzero_part()
        if inf_mine != inf_theirs or len(mine) != len(theirs):
            return False
        unmatched = list(theirs)
        for ev in mine:
            best = min(unmatched, key=lambda o: abs(o.value - ev.value), default=None)
            if best is None or abs(best.value - ev.value) > atol:
                return False
            if best.jordan_sizes != ev.jordan_sizes:
                return False
            unmatched.remove(best)
        return True

    def to_dict(self) -> dict[str, Any]:
        return {
            "shape": list(self.shape),
            "finite_eigenvalues": [
                {"value": encode_eigenvalue(ev.value), "jordan_sizes": list(ev.jordan_sizes)}
                for ev in self.finite_eigenvalues
            ],
            "infinite_jordan_sizes": list(self.infinite_jordan_sizes),
            "right_minimal_indices": list(self.right_minimal_indices),
            "left_minimal_indices": list(self.left_minimal_indices),
            "normal_rank": self.normal_rank,
            "index": self.index,
            "regular": self.is_regular,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "KroneckerStructure":
        return cls(
            shape=(int(data["shape"][0]), int(data["shape"][1])),
            finite_eigenvalues=tuple(
                FiniteEigenvalue(decode_eigenvalue(item["value"]), tuple(item["jordan_sizes"]))
                for item in data["finite_eigenvalues"]
            ),
            infinite_jordan_sizes=tuple(data["infinite_jordan_sizes"]),
            right_minimal_indices=tuple(data["right_minimal_indices"]),
            left_minimal_indices=tuple(data["left_minimal_indices"]),
            normal_rank=int(data["normal_rank"]),
        )


@dataclass(frozen=True, eq=False)
class DeflatingBasis:
    """Basis of a right regular deflating subspace for one eigenvalue.

    ``Y (lambda E - A) X`` is block diagonal with the leading ``k x k`` block regular and
    carrying only ``eigenvalue``; ``V`` is an orthonormal basis of ``span(X[:, :k])``.
    Such subspaces are not unique for singular pencils; this is one valid choice.
    """

    eigenvalue: complex
    V: Matrix
    Y: Matrix
    X: Matrix
    split_residual: float = 0.0
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def dimension(self) -> int:
        return int(self.V.shape[1])

    def certificate(
        self, e: Matrix, a: Matrix
    ) -> tuple[Matrix, Matrix, Matrix, Matrix, float]:
        """Transformed blocks ``(R_E, R_A, P_E, P_A, coupling)`` of ``Y (lambda E - A) X``.

        ``coupling`` is the norm of the off-diagonal blocks and vanishes up to roundoff.
        """
        k = self.dimension
        te = self.Y @ e @ self.X
        ta = self.Y @ a @ self.X
        coupling = max(
            norm2(te[:k, k:]), norm2(te[k:, :k]), norm2(ta[:k, k:]), norm2(ta[k:, :k])
        )
        return te[:k, :k], ta[:k, :k], te[k:, k:], ta[k:, k:], coupling


def sorted_desc(values: list[int] | tuple[int, ...]) -> tuple[int, ...]:
    return tuple(sorted((int(v) for v in values), reverse=True))


def as_complex(value: complex | float) -> complex:
    return complex(np.complex128(value))
