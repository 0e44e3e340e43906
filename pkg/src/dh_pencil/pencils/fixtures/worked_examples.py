"""Small hand-checkable pencils illustrating spectral and singular structure."""

from typing import Any

import numpy as np

from ..structured_pencil import StructuredPencil
from .core import (
    BaseFixture,
    ExpectedStructure,
    FixtureParameter,
    ParameterType,
    register_fixture,
)

_SKEW = np.array([[0.0, -1.0], [1.0, 0.0]])


@register_fixture
class RightHalfPlaneFixture(BaseFixture):
    """Hamiltonian structure holds but ``lambda E - Q`` has a left minimal index one,
    and ``P`` has the eigenvalue ``a > 0``."""

    def get_fixture_id(self) -> str:
        return "ex:rhp"

    def get_description(self) -> str:
        return "E*Q = 0 and L + L* = 0, yet eigenvalue a > 0 in the right half plane"

    def get_parameters(self) -> list[FixtureParameter]:
        return [
            FixtureParameter(
                "a", "location of the unstable eigenvalue", ParameterType.SCALAR, 1.0,
                min_value=0.0, exclusive_min=True,
            )
        ]

    def get_expected_structure(self) -> ExpectedStructure:
        return ExpectedStructure(
            b1a=True, b1c=True, dissipative=True, r_psd=True,
            notes={"left_indices_EQ": [1], "eigenvalue": "a"},
        )

    def build(self, params: dict[str, Any]) -> StructuredPencil:
        a = params["a"]
        e = np.diag([1.0, 0.0])
        q = np.array([[0.0, 0.0], [a, 0.0]])
        return StructuredPencil(E=e, Q=q, L=np.array([[0.0, 1.0], [-1.0, 0.0]]))


@register_fixture
class NonSemisimpleZeroFixture(BaseFixture):
    """``lambda I - [[0, 0], [1, 0]]``: zero with algebraic multiplicity two, geometric one."""

    def get_fixture_id(self) -> str:
        return "nonsimple0"

    def get_description(self) -> str:
        return "E = I, Q = diag(1, 0), L = J: eigenvalue zero is not semisimple"

    def get_expected_structure(self) -> ExpectedStructure:
        return ExpectedStructure(
            b1a=True, b1b=True, b1c=True, r_psd=True, dissipative=True,
            notes={"zero_jordan_sizes": [2]},
        )

    def build(self, params: dict[str, Any]) -> StructuredPencil:
        return StructuredPencil(E=np.eye(2), Q=np.diag([1.0, 0.0]), L=_SKEW.copy())


@register_fixture
class IndexTwoFixture(BaseFixture):
    """Swapping the roles of ``E`` and ``Q`` above gives index two with ``lambda E - Q`` regular."""

    def get_fixture_id(self) -> str:
        return "index-two"

    def get_description(self) -> str:
        return "E = diag(1, 0), Q = I, L = J: eigenvalue infinity with one Jordan block of size 2"

    def get_expected_structure(self) -> ExpectedStructure:
        return ExpectedStructure(
            b1a=True, b1b=True, b1c=True, r_psd=True, dissipative=True,
            notes={"infinite_jordan_sizes": [2], "index": 2},
        )

    def build(self, params: dict[str, Any]) -> StructuredPencil:
        return StructuredPencil(E=np.diag([1.0, 0.0]), Q=np.eye(2), L=_SKEW.copy())


@register_fixture
class RightIndexOneFixture(BaseFixture):
    """Regular ``lambda E - Q`` while ``P`` has a right minimal index one."""

    def get_fixture_id(self) -> str:
        return "right-index-one"

    def get_description(self) -> str:
        return "E = diag(1, 0), Q = diag(0, 1), L = [[-1, 1], [-1, 0]]: minimal indices {1} / {0}"

    def get_expected_structure(self) -> ExpectedStructure:
        return ExpectedStructure(
            b1a=True, b1c=True, r_psd=True, dissipative=True,
            notes={"right_minimal_indices": [1], "left_minimal_indices": [0]},
        )

    def build(self, params: dict[str, Any]) -> StructuredPencil:
        return StructuredPencil(
            E=np.diag([1.0, 0.0]),
            Q=np.diag([0.0, 1.0]),
            L=np.array([[-1.0, 1.0], [-1.0, 0.0]]),
        )


@register_fixture
class LargeLeftIndexFixture(BaseFixture):
    """``E = Q = diag(I_{n-1}, 0)`` with tridiagonal skew ``J``: one left minimal index ``n - 1``."""

    def get_fixture_id(self) -> str:
        return "rem:ind"

    def get_description(self) -> str:
        return "singular lambda E - Q forcing a left minimal index n - 1 in P"

    def get_parameters(self) -> list[FixtureParameter]:
        return [FixtureParameter("n", "order of the pencil", ParameterType.INTEGER, 3, min_value=2)]

    def get_expected_structure(self) -> ExpectedStructure:
        return ExpectedStructure(
            b1a=True, b1b=True, b1c=True, r_psd=True, dissipative=True,
            notes={"left_minimal_indices": "n-1", "right_minimal_indices": [0]},
        )

    def build(self, params: dict[str, Any]) -> StructuredPencil:
        n = params["n"]
        e = np.diag([1.0] * (n - 1) + [0.0])
        j = np.diag(np.ones(n - 1), -1) - np.diag(np.ones(n - 1), 1)
        return StructuredPencil(E=e, Q=e.copy(), L=j)


@register_fixture
class DeflatingExampleFixture(BaseFixture):
    """``lambda E - A = J_1(1) (+) L_1``, wrapped as ``(E, Q = A, L = I)``."""

    def get_fixture_id(self) -> str:
        return "exdefl"

    def get_description(self) -> str:
        return "2 x 3 pencil with eigenvalue 1 and right minimal index 1"

    def get_expected_structure(self) -> ExpectedStructure:
        return ExpectedStructure(
            b1a=False,
            notes={"finite_eigenvalues": {1.0: [1]}, "right_minimal_indices": [1]},
        )

    def build(self, params: dict[str, Any]) -> StructuredPencil:
        e = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
        a = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
        return StructuredPencil.from_pair(e, a)


@register_fixture
class SymmetricProductSingularFixture(BaseFixture):
    """3 x 2 pair with ``E*Q`` symmetric that is not equivalent to a diagonal pair."""

    def get_fixture_id(self) -> str:
        return "ex:sp"

    def get_description(self) -> str:
        return "E*Q = [[1, 1], [1, 0]] symmetric, lambda E - Q has left minimal index 2"

    def get_expected_structure(self) -> ExpectedStructure:
        return ExpectedStructure(b1a=True, notes={"left_minimal_indices": [2]})

    def build(self, params: dict[str, Any]) -> StructuredPencil:
        e = np.array([[1.0, 0.0], [1.0, 1.0], [0.0, 0.0]])
        q = np.array([[0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
        return StructuredPencil(E=e, Q=q, L=-np.eye(3))
