"""Generator service - named fixtures and random pencils written as manifests."""

import json
import logging
from collections.abc import Sequence
from pathlib import Path
from typing import Any

import numpy as np

from ..core.errors import InvalidParams
from ..forms.generators import generate_prescribed_left_indices, random_structured_pencil
from ..io.descriptor import PencilDescriptor
from ..pencils.fixtures import fixture, list_fixtures
from ..pencils.structured_pencil import StructuredPencil


def parse_param(item: str) -> tuple[str, Any]:
    """Split ``key=value``; values are read as JSON when possible, else kept as text.

    Raises:
        InvalidParams: If ``item`` has no ``=``.
    """
    key, sep, raw = item.partition("=")
    if not sep or not key.strip():
        raise InvalidParams(f"expected key=value, got {item!r}")
    try:
        value: Any = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key.strip(), value


class GeneratorService:
    """Builds fixtures or generated pencils and exports them."""

    def __init__(self, max_size: int = 200) -> None:
        self.logger = logging.getLogger(__name__)
        self.max_size = max_size

    def fixture_names(self) -> list[tuple[str, str]]:
        return [(f.fixture_id, f.description) for f in list_fixtures()]

    def fixture(self, name: str, params: Sequence[str] = ()) -> StructuredPencil:
        values = dict(parse_param(p) for p in params)
        pencil = fixture(name, **values)
        self.logger.debug(f"Built fixture {name} with {sorted(values)}")
        return pencil

    def left_indices(
        self, etas: Sequence[int], n: int, m: int, seed: int | None = None
    ) -> StructuredPencil:
        """Pair with prescribed left minimal indices, wrapped with ``L = -I``."""
        self._check_size(n, m)
        e, q = generate_prescribed_left_indices(n, m, etas, seed=seed)
        label = ",".join(str(x) for x in etas) or "none"
        return StructuredPencil(
            E=e,
            Q=q,
            L=-np.eye(n),
            name=f"left-indices-{label}-{n}x{m}",
            metadata={"left_indices": label},
        )

    def random(
        self, n: int, m: int, seed: int, regular: bool = False, complex_field: bool = False
    ) -> StructuredPencil:
        self._check_size(n, m)
        return random_structured_pencil(
            n, m, seed, regular=regular, zero_left_indices=True, complex_field=complex_field
        )

    def export(self, pencil: StructuredPencil, out_dir: Path | str, stem: str | None = None) -> Path:
        """Write the pencil's Matrix Market files and manifest; returns the manifest path."""
        metadata = {k: str(v) for k, v in pencil.metadata.items()}
        _, manifest = PencilDescriptor.export(pencil, out_dir, stem=stem, metadata=metadata)
        self.logger.info(f"Exported {pencil!r} to {manifest}")
        return manifest

    def _check_size(self, n: int, m: int) -> None:
        if max(n, m) > self.max_size:
            raise InvalidParams(f"requested {n} x {m} exceeds the configured maximum {self.max_size}")
