"""Matrix Market files, pencil manifests and analysis documents."""

from .descriptor import MatrixSource, PencilDescriptor, load_manifest, load_pencil
from .document import AnalysisDocument
from .matrix_market import (
    MatrixMarketHeader,
    format_matrix_market,
    parse_matrix_market,
    read_matrix_market,
    write_matrix_market,
)

__all__ = [
    "AnalysisDocument",
    "MatrixMarketHeader",
    "MatrixSource",
    "PencilDescriptor",
    "format_matrix_market",
    "load_manifest",
    "load_pencil",
    "parse_matrix_market",
    "read_matrix_market",
    "write_matrix_market",
]
