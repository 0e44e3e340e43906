"""Shared pytest fixtures."""

import os

os.environ.setdefault("DH_PENCIL_ENV", "test")
os.environ.pop("DH_PENCIL_TOL", None)

from collections.abc import Callable  # noqa: E402
from pathlib import Path  # noqa: E402
from typing import Any  # noqa: E402

import numpy as np  # noqa: E402
import pytest  # noqa: E402

from dh_pencil.io.descriptor import PencilDescriptor  # noqa: E402
from dh_pencil.linalg.tolerance import DEFAULT_TOLERANCE, Tolerance  # noqa: E402
from dh_pencil.pencils import fixture  # noqa: E402
from dh_pencil.pencils.structured_pencil import StructuredPencil  # noqa: E402


@pytest.fixture
def tol() -> Tolerance:
    return DEFAULT_TOLERANCE


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def pencil_dir(tmp_path: Path) -> Path:
    directory = tmp_path / "pencils"
    directory.mkdir()
    return directory


@pytest.fixture
def export_pencil(pencil_dir: Path) -> Callable[[StructuredPencil, str | None], Path]:
    """Write a pencil as Matrix Market files plus manifest; returns the manifest path."""

    def _export(pencil: StructuredPencil, stem: str | None = None) -> Path:
        _, manifest = PencilDescriptor.export(pencil, pencil_dir, stem=stem)
        return manifest

    return _export


@pytest.fixture
def export_fixture(
    export_pencil: Callable[[StructuredPencil, str | None], Path],
) -> Callable[..., Path]:
    def _export(name: str, **params: Any) -> Path:
        return export_pencil(fixture(name, **params), None)

    return _export
