"""Descriptor models from circuits, incompressible flow and gas networks (all with Q = I)."""

from typing import Any

import numpy as np

from ...core.errors import InvalidParams
from ...linalg.kernels import numerical_rank
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

_DH_FLAGS = ExpectedStructure(b1a=True, b1b=True, b1c=True, r_psd=True, dissipative=True)


@register_fixture
class RLCNetworkFixture(BaseFixture):
    """Modified nodal analysis of an RLC circuit.

    ``E = diag(Gc C Gc^T, L, 0)`` and ``J - R`` is the printed right-hand side matrix
    ``[[-Gr Rr^-1 Gr^T, -Gl, -Gv], [Gl^T, 0, 0], [Gv^T, 0, 0]]``.
    """

    def get_fixture_id(self) -> str:
        return "rlc"

    def get_description(self) -> str:
        return "RLC network in modified nodal form (state V, I_l, I_v)"

    def get_parameters(self) -> list[FixtureParameter]:
        return [
            matrix_parameter("Gc", "capacitor incidence (nodes x capacitors)", [[1.0], [0.0]]),
            matrix_parameter("C", "capacitances", [[1.0]], MatrixConstraint.PD),
            matrix_parameter("Gl", "inductor incidence (nodes x inductors)", [[1.0], [-1.0]]),
            matrix_parameter("L", "inductances", [[1.0]], MatrixConstraint.PD),
            matrix_parameter("Gr", "resistor incidence (nodes x resistors)", [[0.0], [1.0]]),
            matrix_parameter("Rr", "resistances", [[1.0]], MatrixConstraint.PD),
            matrix_parameter("Gv", "voltage source incidence (nodes x sources)", [[1.0], [0.0]]),
        ]

    def get_expected_structure(self) -> ExpectedStructure:
        return _DH_FLAGS

    def build(self, params: dict[str, Any]) -> StructuredPencil:
        gc, c, gl, ind = params["Gc"], params["C"], params["Gl"], params["L"]
        gr, rr, gv = params["Gr"], params["Rr"], params["Gv"]
        nodes = gc.shape[0]
        for name in ("Gl", "Gr", "Gv"):
            if params[name].shape[0] != nodes:
                raise InvalidParams(f"'{name}' must have {nodes} rows (one per node)")
        require_shape("C", c, gc.shape[1], gc.shape[1])
        require_shape("L", ind, gl.shape[1], gl.shape[1])
        require_shape("Rr", rr, gr.shape[1], gr.shape[1])
        if numerical_rank(gv) < gv.shape[1]:
            raise InvalidParams("'Gv' must have full column rank")
        n_l, n_v = gl.shape[1], gv.shape[1]

        e = np.zeros((nodes + n_l + n_v,) * 2)
        e[:nodes, :nodes] = gc @ c @ gc.T
        e[nodes : nodes + n_l, nodes : nodes + n_l] = ind
        rhs = np.block(
            [
                [-gr @ np.linalg.solve(rr, gr.T), -gl, -gv],
                [gl.T, np.zeros((n_l, n_l)), np.zeros((n_l, n_v))],
                [gv.T, np.zeros((n_v, n_l)), np.zeros((n_v, n_v))],
            ]
        )
        return StructuredPencil(E=e, Q=np.eye(e.shape[0]), L=rhs)


@register_fixture
class StokesFixture(BaseFixture):
    """Semi-discretized Stokes/Oseen flow, singular when ``B`` is rank deficient."""

    def get_fixture_id(self) -> str:
        return "stokes"

    def get_description(self) -> str:
        return "Stokes/Oseen discretization: E = diag(M, 0), J = [[0, B], [-B^T, 0]]"

    def get_parameters(self) -> list[FixtureParameter]:
        return [
            matrix_parameter("A", "discrete negative Laplacian", [[1.0]], MatrixConstraint.PSD),
            matrix_parameter("B", "discrete gradient (velocity x pressure)", [[1.0]]),
            matrix_parameter("M", "mass matrix", [[1.0]], MatrixConstraint.PD),
        ]

    def get_expected_structure(self) -> ExpectedStructure:
        return _DH_FLAGS

    def build(self, params: dict[str, Any]) -> StructuredPencil:
        a, b, m = params["A"], params["B"], params["M"]
        k, p = b.shape
        require_shape("A", a, k, k)
        require_shape("M", m, k, k)
        e = np.zeros((k + p, k + p))
        e[:k, :k] = m
        j = np.block([[np.zeros((k, k)), b], [-b.T, np.zeros((p, p))]])
        r = np.zeros((k + p, k + p))
        r[:k, :k] = a
        return StructuredPencil.from_parts(E=e, Q=np.eye(k + p), J=j, R=r)


@register_fixture
class GasNetworkFixture(BaseFixture):
    """Semi-discretized isothermal Euler equations on a gas network."""

    def get_fixture_id(self) -> str:
        return "gas-network"

    def get_description(self) -> str:
        return "gas network: E = diag(M1, M2, 0), J = [[0,-G,0],[G^T,0,K^T],[0,-K,0]]"

    def get_parameters(self) -> list[FixtureParameter]:
        return [
            matrix_parameter("M1", "pressure mass matrix", [[1.0]], MatrixConstraint.PD),
            matrix_parameter("M2", "flux mass matrix", [[1.0]], MatrixConstraint.PD),
            matrix_parameter("G", "coupling (pressure x flux)", [[1.0]]),
            matrix_parameter("K", "boundary coupling (constraints x flux)", [[1.0]]),
            matrix_parameter("D", "friction", [[1.0]], MatrixConstraint.PD),
        ]

    def get_expected_structure(self) -> ExpectedStructure:
        return _DH_FLAGS

    def build(self, params: dict[str, Any]) -> StructuredPencil:
        m1, m2, g, k, d = (params[key] for key in ("M1", "M2", "G", "K", "D"))
        a, b = g.shape
        c = k.shape[0]
        require_shape("M1", m1, a, a)
        require_shape("M2", m2, b, b)
        require_shape("D", d, b, b)
        require_shape("K", k, c, b)
        n = a + b + c
        e = np.zeros((n, n))
        e[:a, :a] = m1
        e[a : a + b, a : a + b] = m2
        j = np.block(
            [
                [np.zeros((a, a)), -g, np.zeros((a, c))],
                [g.T, np.zeros((b, b)), k.T],
                [np.zeros((c, a)), -k, np.zeros((c, c))],
            ]
        )
        r = np.zeros((n, n))
        r[a : a + b, a : a + b] = d
        return StructuredPencil.from_parts(E=e, Q=np.eye(n), J=j, R=r)
