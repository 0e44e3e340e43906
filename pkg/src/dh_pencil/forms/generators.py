"""Generators: Hankel factors, pairs with prescribed left minimal indices, random pencils."""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.linalg as sla
from numpy.typing import NDArray

from ..core.errors import InfeasibleDimensions, InvalidInput
from ..linalg.kernels import Matrix, adjoint, psd_sqrt
from ..pencils.structured_pencil import StructuredPencil

logger = logging.getLogger(__name__)

HankelFactor = Literal["sqrt", "cholesky"]


@dataclass(frozen=True)
class HankelSpec:
    """Strictly decreasing positive nodes ``xi_1 > ... > xi_k > 0``."""

    nodes: tuple[float, ...]

    def __post_init__(self) -> None:
        nodes = tuple(float(x) for x in self.nodes)
        if any(not math.isfinite(x) or x <= 0 for x in nodes):
            raise InvalidInput(f"Hankel nodes must be finite and positive, got {nodes}")
        if any(a <= b for a, b in zip(nodes, nodes[1:], strict=False)):
            raise InvalidInput(f"Hankel nodes must be strictly decreasing, got {nodes}")
        object.__setattr__(self, "nodes", nodes)

    @property
    def k(self) -> int:
        return len(self.nodes)

    @classmethod
    def integer_nodes(cls, k: int) -> "HankelSpec":
        """Nodes ``k, k - 1, ..., 1``."""
        return cls(tuple(float(k - i) for i in range(k)))


def hankel_from_nodes(
    spec: HankelSpec, factor: HankelFactor = "sqrt"
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Positive definite Hankel matrix ``H[i, j] = sum_l xi_l**(i + j)`` (1-based indices)
    and a factor ``S`` with ``S* S = H``.

    Args:
        spec: Nodes of the Vandermonde factorization.
        factor: ``"sqrt"`` for the principal square root, ``"cholesky"`` for the upper
            triangular Cholesky factor.
    """
    k = spec.k
    xi = np.asarray(spec.nodes)
    powers = np.arange(1, k + 1)
    vander = xi[:, None] ** powers[None, :]
    h = vander.T @ vander
    s = sla.cholesky(h, lower=False) if factor == "cholesky" else psd_sqrt(h)
    return h, np.asarray(s, dtype=np.float64)


def trailing_window(h: NDArray[np.float64]) -> NDArray[np.float64]:
    """``H`` without its first row and last column."""
    return h[1:, :-1]


def left_index_block(k: int) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """``(E0, Q0)`` of the k x (k-1) left singular block with minimal index ``k - 1``."""
    e0 = np.eye(k, k - 1)
    q0 = np.eye(k, k - 1, -1)
    return e0, q0


def direct_sum(pairs: Sequence[tuple[Matrix, Matrix]]) -> tuple[Matrix, Matrix]:
    """Block diagonal assembly of rectangular pairs (zero-sized blocks allowed)."""
    rows = sum(e.shape[0] for e, _ in pairs)
    cols = sum(e.shape[1] for e, _ in pairs)
    dtype = np.result_type(np.float64, *[e for e, _ in pairs], *[q for _, q in pairs])
    e_out = np.zeros((rows, cols), dtype=dtype)
    q_out = np.zeros((rows, cols), dtype=dtype)
    r = c = 0
    for e, q in pairs:
        h, w = e.shape
        e_out[r : r + h, c : c + w] = e
        q_out[r : r + h, c : c + w] = q
        r += h
        c += w
    return e_out, q_out


def _diagonal_psd_pair(rows: int, cols: int) -> tuple[Matrix, Matrix]:
    """``[diag(cos t) 0]``, ``[diag(sin t) 0]`` with distinct angles in ``(0, pi/2)``."""
    theta = np.pi / 2 * np.arange(1, rows + 1) / (rows + 1)
    e = np.zeros((rows, cols))
    q = np.zeros((rows, cols))
    e[np.arange(rows), np.arange(rows)] = np.cos(theta)
    q[np.arange(rows), np.arange(rows)] = np.sin(theta)
    return e, q


def random_unitary(n: int, rng: np.random.Generator, complex_field: bool = False) -> Matrix:
    """Haar-distributed unitary (orthogonal) matrix by QR with phase correction."""
    if n == 0:
        return np.zeros((0, 0), dtype=np.complex128 if complex_field else np.float64)
    g = rng.standard_normal((n, n))
    if complex_field:
        g = g + 1j * rng.standard_normal((n, n))
    q, r = sla.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_invertible(n: int, rng: np.random.Generator, complex_field: bool = False) -> Matrix:
    """Invertible matrix with condition number at most ``e``."""
    u = random_unitary(n, rng, complex_field)
    v = random_unitary(n, rng, complex_field)
    return (u * np.exp(rng.uniform(-0.5, 0.5, size=n))) @ v


def generate_prescribed_left_indices(
    n: int,
    m: int,
    etas: Sequence[int],
    factor: HankelFactor = "sqrt",
    seed: int | None = None,
) -> tuple[Matrix, Matrix]:
    """n x m pair with ``E*Q = Q*E >= 0`` and exactly the left minimal indices ``etas``.

    Each index ``eta`` contributes ``S E0``, ``S Q0`` with ``S`` the Hankel factor for the
    nodes ``eta + 1, ..., 1``; a diagonal semidefinite pair fills the remaining rows and
    columns. With ``seed`` the result is scrambled by a random orthogonal left factor and a
    random invertible right factor, which preserves the structure.

    Raises:
        InfeasibleDimensions: Unless ``n - q <= m`` and ``sum(etas) <= n - q``.
    """
    etas = [int(x) for x in etas]
    q_count = len(etas)
    total = sum(etas)
    if n < 0 or m < 0 or any(x < 0 for x in etas):
        raise InfeasibleDimensions("sizes and indices must be nonnegative")
    if n - q_count > m or total > n - q_count:
        raise InfeasibleDimensions(
            f"left indices {etas} do not fit an {n} x {m} pencil "
            f"(need n - q <= m and sum <= n - q with q = {q_count})"
        )
    pairs: list[tuple[Matrix, Matrix]] = []
    for eta in etas:
        k = eta + 1
        _, s = hankel_from_nodes(HankelSpec.integer_nodes(k), factor)
        e0, q0 = left_index_block(k)
        pairs.append((s @ e0, s @ q0))
    pairs.append(_diagonal_psd_pair(n - total - q_count, m - total))
    e, q = direct_sum(pairs)
    if seed is not None:
        rng = np.random.default_rng(seed)
        u = random_unitary(n, rng)
        x = random_invertible(m, rng)
        e, q = u @ e @ x, u @ q @ x
    logger.debug(f"generated {n}x{m} pair with left minimal indices {etas}")
    return e, q


def random_dissipative(n: int, rng: np.random.Generator, complex_field: bool = False) -> Matrix:
    """``J - R`` with random skew ``J`` and a random positive semidefinite Gram ``R``."""
    g = rng.standard_normal((n, n))
    b = rng.standard_normal((n, n // 2 + 1))
    if complex_field:
        g = g + 1j * rng.standard_normal((n, n))
        b = b + 1j * rng.standard_normal(b.shape)
    j = (g - adjoint(g)) / 2
    r = b @ adjoint(b) / max(n, 1)
    return j - r


def random_structured_pencil(
    n: int,
    m: int,
    seed: int,
    regular: bool = False,
    zero_left_indices: bool = False,
    with_L: bool = True,
    complex_field: bool = False,
    undamped: int = 0,
) -> StructuredPencil:
    """Random pencil ``lambda E - L Q`` with ``E*Q = Q*E >= 0`` and dissipative ``L``.

    The pair ``(E, Q)`` is assembled as a condensed form (diagonal regular part, left
    singular part, zero columns) and scrambled by a random unitary ``U*`` from the left and
    an invertible ``X^-1`` from the right.

    Args:
        n: Rows.
        m: Columns.
        seed: Seed of the random generator.
        regular: Square regular ``lambda E - Q`` (index at most one).
        zero_left_indices: Only zero left (and right) minimal indices.
        with_L: Random dissipative ``L``; otherwise ``L = -I``.
        complex_field: Complex data.
        undamped: Size of a block on which ``E`` and ``Q`` are invertible and ``L`` is
            skew and decoupled from the rest, so ``R`` vanishes on an invariant subspace
            and the pencil has eigenvalues on the imaginary axis. Regular pencils only.

    Raises:
        InfeasibleDimensions: If ``regular`` is requested for ``n != m``, or
            ``undamped`` without ``regular`` or larger than ``n - 2``.
    """
    if n < 0 or m < 0:
        raise InfeasibleDimensions("sizes must be nonnegative")
    if regular and n != m:
        raise InfeasibleDimensions(f"a regular pencil must be square, got {n} x {m}")
    if undamped < 0 or (undamped and (not regular or undamped > n - 2)):
        raise InfeasibleDimensions(f"cannot plant {undamped} undamped modes in a {n} x {m} pencil")
    rng = np.random.default_rng(seed)
    dtype = np.complex128 if complex_field else np.float64

    if regular:
        theta = rng.uniform(0.0, np.pi / 2, size=n)
        if n >= 3:
            theta[0], theta[1] = 0.0, np.pi / 2
        if undamped:
            theta[n - undamped :] = rng.uniform(0.2, np.pi / 2 - 0.2, size=undamped)
        e0, q0 = np.diag(np.cos(theta)), np.diag(np.sin(theta))
    elif zero_left_indices:
        n1 = int(rng.integers(0, min(n, m) + 1)) if min(n, m) else 0
        theta = rng.uniform(0.0, np.pi / 2, size=n1)
        e0, q0 = direct_sum(
            [(np.diag(np.cos(theta)), np.diag(np.sin(theta))), (np.zeros((n - n1, m - n1)), np.zeros((n - n1, m - n1)))]
        )
    else:
        etas = _random_left_indices(n, m, rng)
        e0, q0 = generate_prescribed_left_indices(n, m, etas)

    u = random_unitary(n, rng, complex_field)
    x = random_invertible(m, rng, complex_field)
    e = (adjoint(u) @ e0 @ x).astype(dtype)
    q = (adjoint(u) @ q0 @ x).astype(dtype)
    ell = random_dissipative(n, rng, complex_field) if with_L else -np.eye(n, dtype=dtype)
    if undamped:
        free = slice(n - undamped, n)
        g = rng.standard_normal((undamped, undamped))
        if complex_field:
            g = g + 1j * rng.standard_normal(g.shape)
        l0 = np.zeros((n, n), dtype=dtype)
        l0[: n - undamped, : n - undamped] = ell[: n - undamped, : n - undamped]
        l0[free, free] = g - adjoint(g)
        ell = adjoint(u) @ l0 @ u
    return StructuredPencil(E=e, Q=q, L=ell, name=f"random-{n}x{m}-{seed}")


def _random_left_indices(n: int, m: int, rng: np.random.Generator) -> list[int]:
    """Feasible left minimal indices for an n x m pencil (possibly none)."""
    etas: list[int] = []
    while n - len(etas) > m:
        etas.append(0)
    while rng.random() < 0.6:
        budget = n - (len(etas) + 1) - sum(etas)
        if budget < 0:
            break
        etas.append(int(rng.integers(0, min(budget, 3) + 1)))
    return etas


def random_index_one_pencil(
    k: int,
    n3: int,
    n4: int,
    seed: int,
    semisimple_zero: bool = False,
    complex_field: bool = False,
) -> StructuredPencil:
    """Random regular index-one pencil with a planted zero eigenvalue.

    In condensed coordinates ``E = diag(I_k, I_n3, 0)``, ``Q = diag(Q1, 0, I_n4)`` with
    positive diagonal ``Q1``, and the first column of ``L`` is supported on the ``n3``
    block only. That column couples the kernel of the leading block to the ``E = I, Q = 0``
    block, which gives zero a Jordan chain of length two; ``semisimple_zero`` removes the
    coupling. The result is scrambled by a unitary ``U*`` and an invertible ``X``.

    Raises:
        InfeasibleDimensions: If ``k < 1``, or ``n3 < 1`` for a non-semisimple zero.
    """
    if k < 1 or n3 < 0 or n4 < 0:
        raise InfeasibleDimensions(f"need k >= 1 and n3, n4 >= 0, got {(k, n3, n4)}")
    if not semisimple_zero and n3 < 1:
        raise InfeasibleDimensions("a non-semisimple zero needs n3 >= 1")
    rng = np.random.default_rng(seed)
    n = k + n3 + n4
    third, fourth = slice(k, k + n3), slice(k + n3, n)

    e0 = np.diag(np.r_[np.ones(k + n3), np.zeros(n4)])
    q0 = np.diag(np.r_[rng.uniform(0.5, 2.0, size=k), np.zeros(n3), np.ones(n4)])
    ell = random_dissipative(n, rng, complex_field)
    j = (ell - adjoint(ell)) / 2
    g = rng.standard_normal((n, n // 2 + 1))
    g[0] = 0
    r = g @ g.T / n
    r[fourth, fourth] += np.eye(n4)
    coupling = j[third, 0].copy()
    j[:, 0] = 0
    j[0, :] = 0
    if not semisimple_zero:
        coupling[0] = 1.0
        j[third, 0] = coupling
        j[0, third] = -coupling.conj()
    l0 = j - r

    u = random_unitary(n, rng, complex_field)
    x = random_invertible(n, rng, complex_field)
    return StructuredPencil(
        E=adjoint(u) @ e0 @ x,
        Q=adjoint(u) @ q0 @ x,
        L=adjoint(u) @ l0 @ u,
        name=f"index-one-{k}-{n3}-{n4}-{seed}",
        metadata={"blocks": [k, n3, n4], "semisimple_zero": semisimple_zero},
    )
