"""Canonical and condensed forms of pairs (E, Q) and structured generators."""

from .condensed import CondensedFormEQ, condensed_form_EQ
from .diagonal_forms import DiagonalPairForm, diagonalize_commuting_pair, diagonalize_regular_pair
from .generators import (
    HankelSpec,
    generate_prescribed_left_indices,
    hankel_from_nodes,
    left_index_block,
    random_index_one_pencil,
    random_structured_pencil,
    trailing_window,
)

__all__ = [
    "CondensedFormEQ",
    "DiagonalPairForm",
    "HankelSpec",
    "condensed_form_EQ",
    "diagonalize_commuting_pair",
    "diagonalize_regular_pair",
    "generate_prescribed_left_indices",
    "hankel_from_nodes",
    "left_index_block",
    "random_index_one_pencil",
    "random_structured_pencil",
    "trailing_window",
]
