"""Numerical kernels and tolerance settings."""

from .kernels import (
    Matrix,
    adjoint,
    as_matrix,
    cs_decomposition,
    hermitian_eig,
    householder_qr,
    is_hermitian,
    is_psd,
    kernel_basis,
    numerical_rank,
    ordered_schur_zero_trailing,
    pseudoinverse,
    psd_pinv_sqrt,
    psd_sqrt,
    range_basis,
    range_projector,
    svd,
)
from .tolerance import DEFAULT_TOLERANCE, Tolerance

__all__ = [
    "DEFAULT_TOLERANCE",
    "Matrix",
    "Tolerance",
    "adjoint",
    "as_matrix",
    "cs_decomposition",
    "hermitian_eig",
    "householder_qr",
    "is_hermitian",
    "is_psd",
    "kernel_basis",
    "numerical_rank",
    "ordered_schur_zero_trailing",
    "psd_pinv_sqrt",
    "psd_sqrt",
    "pseudoinverse",
    "range_basis",
    "range_projector",
    "svd",
]
