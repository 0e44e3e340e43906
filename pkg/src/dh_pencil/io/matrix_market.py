"""Matrix Market reader and writer for dense pencil coefficients.

Both the ``array`` and ``coordinate`` formats are read, with ``real``, ``integer`` and
``complex`` fields and the ``general``, ``symmetric``, ``skew-symmetric`` and
``hermitian`` symmetry classes. Symmetric storage is expanded to a full dense matrix.
Values are written with the shortest decimal that reads back to the same double.
"""

import logging
import math
from collections.abc import Iterator
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.typing import ArrayLike

from ..core.errors import InvalidInput, ParseError, SymmetryViolation
from ..linalg.kernels import Matrix, as_matrix

logger = logging.getLogger(__name__)

HEADER_BANNER = "%%MatrixMarket"
FORMATS = ("array", "coordinate")
FIELDS = ("real", "integer", "complex")
SYMMETRIES = ("general", "symmetric", "skew-symmetric", "hermitian")


@dataclass(frozen=True)
class MatrixMarketHeader:
    """The banner line: storage format, number field and symmetry class."""

    format: str
    field: str
    symmetry: str

    @property
    def is_complex(self) -> bool:
        return self.field == "complex"

    def banner(self) -> str:
        return f"{HEADER_BANNER} matrix {self.format} {self.field} {self.symmetry}"


def format_value(x: float) -> str:
    """Shortest scientific representation that reads back to the same double."""
    return np.format_float_scientific(x, unique=True, trim="0")


def _parse_header(line: str, path: Path | None) -> MatrixMarketHeader:
    tokens = line.split()
    if len(tokens) != 5 or tokens[0].lower() != HEADER_BANNER.lower():
        raise ParseError(f"expected '{HEADER_BANNER} matrix <format> <field> <symmetry>'", path, 1)
    obj, fmt, fld, sym = (t.lower() for t in tokens[1:])
    if obj != "matrix":
        raise ParseError(f"unsupported object '{obj}'", path, 1)
    if fmt not in FORMATS:
        raise ParseError(f"unsupported format '{fmt}'", path, 1)
    if fld not in FIELDS:
        raise ParseError(f"unsupported field '{fld}'", path, 1)
    if sym not in SYMMETRIES:
        raise ParseError(f"unsupported symmetry '{sym}'", path, 1)
    if sym == "hermitian" and fld != "complex":
        raise ParseError("hermitian symmetry requires the complex field", path, 1)
    return MatrixMarketHeader(fmt, fld, sym)


def _content_lines(lines: list[str]) -> Iterator[tuple[int, list[str]]]:
    """Non-comment, non-blank lines after the banner with their 1-based numbers."""
    for number, raw in enumerate(lines[1:], start=2):
        stripped = raw.strip()
        if stripped and not stripped.startswith("%"):
            yield number, stripped.split()


def _number(token: str, header: MatrixMarketHeader, path: Path | None, line: int) -> float:
    try:
        value = float(int(token)) if header.field == "integer" else float(token)
    except ValueError as e:
        raise ParseError(f"'{token}' is not a valid {header.field} value", path, line) from e
    if not math.isfinite(value):
        raise ParseError(f"non-finite value '{token}'", path, line)
    return value


def _entry(
    tokens: list[str], header: MatrixMarketHeader, path: Path | None, line: int
) -> complex | float:
    width = 2 if header.is_complex else 1
    if len(tokens) != width:
        raise ParseError(f"expected {width} value(s), got {len(tokens)}", path, line)
    if header.is_complex:
        return complex(_number(tokens[0], header, path, line), _number(tokens[1], header, path, line))
    return _number(tokens[0], header, path, line)


def _stored_positions(rows: int, cols: int, symmetry: str) -> Iterator[tuple[int, int]]:
    """Column-major positions stored by the array format for a symmetry class."""
    for j in range(cols):
        if symmetry == "general":
            start = 0
        elif symmetry == "skew-symmetric":
            start = j + 1
        else:
            start = j
        for i in range(start, rows):
            yield i, j


def _mirror(a: Matrix, symmetry: str, path: Path | None) -> Matrix:
    """Fill the strict upper triangle from the stored lower one."""
    if symmetry == "general":
        return a
    lower = np.tril(a, -1)
    if symmetry == "symmetric":
        return a + lower.T
    if symmetry == "skew-symmetric":
        return a - lower.T
    diag = np.diag(a)
    if np.any(np.imag(diag) != 0):
        raise SymmetryViolation(f"{path or 'matrix'}: hermitian diagonal has imaginary parts")
    return a + lower.conj().T


def parse_matrix_market(text: str, path: Path | str | None = None) -> Matrix:
    """Parse Matrix Market text into a dense float or complex matrix.

    Raises:
        ParseError: For a malformed banner, size line or entry, with its line number.
        SymmetryViolation: If stored entries contradict the declared symmetry class.
    """
    where = Path(path) if path is not None else None
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty file", where, 1)
    header = _parse_header(lines[0], where)
    content = _content_lines(lines)

    try:
        size_line, size_tokens = next(content)
    except StopIteration:
        raise ParseError("missing size line", where, len(lines)) from None
    expected = 2 if header.format == "array" else 3
    if len(size_tokens) != expected:
        raise ParseError(f"size line needs {expected} integers", where, size_line)
    try:
        sizes = [int(t) for t in size_tokens]
    except ValueError as e:
        raise ParseError("size line holds a non-integer", where, size_line) from e
    if any(s < 0 for s in sizes):
        raise ParseError("negative dimension", where, size_line)
    rows, cols = sizes[0], sizes[1]
    if header.symmetry != "general" and rows != cols:
        raise ParseError(f"{header.symmetry} storage needs a square matrix", where, size_line)

    dtype = np.complex128 if header.is_complex else np.float64
    a = np.zeros((rows, cols), dtype=dtype)
    last_line = size_line
    if header.format == "array":
        positions = _stored_positions(rows, cols, header.symmetry)
        for number, tokens in content:
            last_line = number
            try:
                i, j = next(positions)
            except StopIteration:
                raise ParseError("more entries than the size line declares", where, number) from None
            a[i, j] = _entry(tokens, header, where, number)
        if next(positions, None) is not None:
            raise ParseError("fewer entries than the size line declares", where, last_line)
    else:
        nnz = sizes[2]
        seen: set[tuple[int, int]] = set()
        for number, tokens in content:
            last_line = number
            if len(seen) == nnz:
                raise ParseError("more entries than the size line declares", where, number)
            if len(tokens) < 3:
                raise ParseError("coordinate entries need row, column and value", where, number)
            try:
                i, j = int(tokens[0]) - 1, int(tokens[1]) - 1
            except ValueError as e:
                raise ParseError("non-integer coordinate", where, number) from e
            if not (0 <= i < rows and 0 <= j < cols):
                raise ParseError(f"entry ({i + 1}, {j + 1}) is out of range", where, number)
            if (i, j) in seen:
                raise ParseError(f"duplicate entry ({i + 1}, {j + 1})", where, number)
            value = _entry(tokens[2:], header, where, number)
            if header.symmetry != "general":
                if i < j:
                    raise SymmetryViolation(
                        f"{where or 'matrix'}:{number}: {header.symmetry} storage keeps the "
                        f"lower triangle, got ({i + 1}, {j + 1})"
                    )
                if i == j and header.symmetry == "skew-symmetric" and value != 0:
                    raise SymmetryViolation(
                        f"{where or 'matrix'}:{number}: skew-symmetric diagonal must vanish"
                    )
            seen.add((i, j))
            a[i, j] = value
        if len(seen) != nnz:
            raise ParseError(f"expected {nnz} entries, found {len(seen)}", where, last_line)

    result = _mirror(a, header.symmetry, where)
    logger.debug(f"parsed {rows}x{cols} {header.field} {header.symmetry} matrix from {where}")
    return result


def read_matrix_market(path: Path | str) -> Matrix:
    """Read a Matrix Market file into a dense matrix.

    Raises:
        ParseError: For unreadable or malformed files.
        SymmetryViolation: If stored entries contradict the declared symmetry class.
    """
    file_path = Path(path)
    try:
        text = file_path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read file: {e}", file_path) from e
    return parse_matrix_market(text, file_path)


def _check_symmetry(a: Matrix, symmetry: str) -> None:
    if symmetry == "general":
        return
    if a.shape[0] != a.shape[1]:
        raise SymmetryViolation(f"{symmetry} storage needs a square matrix, got {a.shape}")
    reference = {"symmetric": a.T, "skew-symmetric": -a.T, "hermitian": a.conj().T}[symmetry]
    if not np.array_equal(a, reference):
        raise SymmetryViolation(f"matrix is not exactly {symmetry}")


def format_matrix_market(
    a: ArrayLike,
    symmetry: str = "general",
    storage: str = "array",
    comment: str | None = None,
) -> str:
    """Render a dense matrix as Matrix Market text.

    Args:
        a: Matrix to write; complex dtype selects the complex field.
        symmetry: Symmetry class; only the lower triangle is stored when not general.
        storage: ``"array"`` or ``"coordinate"`` (nonzero stored entries only).
        comment: Optional comment lines placed after the banner.

    Raises:
        SymmetryViolation: If ``a`` does not have the requested symmetry exactly.
    """
    arr = as_matrix(a, "matrix")
    if symmetry not in SYMMETRIES or storage not in FORMATS:
        raise InvalidInput(f"unsupported storage {storage!r} or symmetry {symmetry!r}")
    _check_symmetry(arr, symmetry)
    is_complex = np.iscomplexobj(arr)
    header = MatrixMarketHeader(storage, "complex" if is_complex else "real", symmetry)
    rows, cols = arr.shape

    def render(x: complex | float) -> str:
        if is_complex:
            return f"{format_value(float(x.real))} {format_value(float(x.imag))}"
        return format_value(float(np.real(x)))

    out = [header.banner()]
    if comment:
        out.extend(f"% {line}" for line in comment.splitlines())
    positions = list(_stored_positions(rows, cols, symmetry))
    if storage == "array":
        out.append(f"{rows} {cols}")
        out.extend(render(arr[i, j]) for i, j in positions)
    else:
        nonzero = [(i, j) for i, j in positions if arr[i, j] != 0]
        out.append(f"{rows} {cols} {len(nonzero)}")
        out.extend(f"{i + 1} {j + 1} {render(arr[i, j])}" for i, j in nonzero)
    return "\n".join(out) + "\n"


def write_matrix_market(
    a: ArrayLike,
    path: Path | str,
    symmetry: str = "general",
    storage: str = "array",
    comment: str | None = None,
) -> Path:
    """Write ``a`` as a Matrix Market file, creating parent directories."""
    file_path = Path(path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    file_path.write_text(format_matrix_market(a, symmetry, storage, comment), encoding="utf-8")
    logger.debug(f"wrote {file_path}")
    return file_path
