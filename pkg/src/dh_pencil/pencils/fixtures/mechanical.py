"""First order formulations of damped mechanical systems."""

from typing import Any

import numpy as np

from ..structured_pencil import StructuredPencil
from .core import (
    BaseFixture,
    ExpectedStructure,
    FixtureParameter,
    MatrixConstraint,
    matrix_parameter,
    register_fixture,
    require_shape,
)


@register_fixture
class MechanicalFixture(BaseFixture):
    """``M x'' + D x' + K x = f`` as ``lambda diag(M, I) - ([[0, I], [-I, 0]] - diag(D, 0)) diag(I, K)``.

    With ``M = K = 0`` this is the strongly damped limit, singular when ``D`` is.
    """

    def get_fixture_id(self) -> str:
        return "mechanical"

    def get_description(self) -> str:
        return "damped mechanical system M x'' + D x' + K x = f in first order form"

    def get_parameters(self) -> list[FixtureParameter]:
        return [
            matrix_parameter("M", "mass matrix", [[1.0]], MatrixConstraint.PSD),
            matrix_parameter("D", "damping matrix", [[1.0]], MatrixConstraint.PSD),
            matrix_parameter("K", "stiffness matrix", [[1.0]], MatrixConstraint.PSD),
        ]

    def get_expected_structure(self) -> ExpectedStructure:
        return ExpectedStructure(b1a=True, b1b=True, b1c=True, r_psd=True, dissipative=True)

    def build(self, params: dict[str, Any]) -> StructuredPencil:
        m, d, k = params["M"], params["D"], params["K"]
        size = m.shape[0]
        require_shape("D", d, size, size)
        require_shape("K", k, size, size)
        return mechanical_pencil(m, d, k)


def mechanical_pencil(m: np.ndarray, d: np.ndarray, k: np.ndarray) -> StructuredPencil:
    """Assemble the first order pencil of ``lambda^2 M + lambda D + K``."""
    size = m.shape[0]
    eye = np.eye(size)
    zero = np.zeros((size, size))
    dtype = np.result_type(m, d, k)
    e = np.block([[m, zero], [zero, eye]]).astype(dtype)
    j = np.block([[zero, eye], [-eye, zero]])
    r = np.block([[d, zero], [zero, zero]]).astype(dtype)
    q = np.block([[eye, zero], [zero, k]]).astype(dtype)
    return StructuredPencil.from_parts(E=e, Q=q, J=j, R=r)


@register_fixture
class ConstrainedMechanicalFixture(BaseFixture):
    """Mechanical system with the differentiated position constraint ``G x' = 0``.

    State ordering is ``(x', y', x, y)`` with Lagrange multiplier ``y``. The multiplier
    coupling in ``J`` is taken skew, ``J[(4, 2)] = -I``, so that ``L = J - R`` is split
    with ``R = diag(D, 0, 0, 0)``. ``E*Q`` is symmetric but indefinite once ``G != 0``.
    """

    def get_fixture_id(self) -> str:
        return "constrained-mechanical"

    def get_description(self) -> str:
        return "mechanical system with constraint G x = 0 and Lagrange multiplier"

    def get_parameters(self) -> list[FixtureParameter]:
        return [
            matrix_parameter("M", "mass matrix", [[1.0]], MatrixConstraint.PSD),
            matrix_parameter("D", "damping matrix", [[0.0]], MatrixConstraint.PSD),
            matrix_parameter("K", "stiffness matrix", [[1.0]], MatrixConstraint.PSD),
            matrix_parameter("G", "constraint matrix (constraints x positions)", [[1.0]]),
        ]

    def get_expected_structure(self) -> ExpectedStructure:
        return ExpectedStructure(b1a=True, b1b=True, b1c=False, r_psd=True, dissipative=True)

    def build(self, params: dict[str, Any]) -> StructuredPencil:
        m, d, k, g = params["M"], params["D"], params["K"], params["G"]
        p, size = g.shape
        require_shape("M", m, size, size)
        require_shape("D", d, size, size)
        require_shape("K", k, size, size)
        sizes = (size, p, size, p)
        offsets = np.cumsum((0,) + sizes)
        n = int(offsets[-1])

        def block(i: int) -> slice:
            return slice(int(offsets[i]), int(offsets[i + 1]))

        e = np.zeros((n, n))
        e[block(0), block(0)] = m
        e[block(2), block(2)] = np.eye(size)
        e[block(3), block(3)] = np.eye(p)

        j = np.zeros((n, n))
        j[block(0), block(2)] = np.eye(size)
        j[block(1), block(3)] = np.eye(p)
        j[block(2), block(0)] = -np.eye(size)
        j[block(3), block(1)] = -np.eye(p)

        r = np.zeros((n, n))
        r[block(0), block(0)] = d

        q = np.zeros((n, n))
        q[block(0), block(0)] = np.eye(size)
        q[block(1), block(1)] = np.eye(p)
        q[block(2), block(2)] = k
        q[block(2), block(3)] = g.T
        q[block(3), block(2)] = g
        return StructuredPencil.from_parts(E=e, Q=q, J=j, R=r)
