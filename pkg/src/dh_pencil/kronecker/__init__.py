"""Kronecker structure of rectangular pencils by unitary staircase reduction."""

from .deflating import regular_deflating_basis
from .staircase import (
    RegularPart,
    StaircaseForm,
    decompose,
    eigenvalues,
    kronecker_structure,
    regular_part,
    reverse_pencil,
    staircase,
)
from .structure import (
    INFINITE_EIGENVALUE,
    DeflatingBasis,
    FiniteEigenvalue,
    KroneckerStructure,
    is_infinite,
)

__all__ = [
    "INFINITE_EIGENVALUE",
    "DeflatingBasis",
    "FiniteEigenvalue",
    "KroneckerStructure",
    "RegularPart",
    "StaircaseForm",
    "decompose",
    "eigenvalues",
    "is_infinite",
    "kronecker_structure",
    "regular_deflating_basis",
    "regular_part",
    "reverse_pencil",
    "staircase",
]
