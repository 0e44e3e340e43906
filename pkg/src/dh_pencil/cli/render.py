"""Text and JSON rendering of command results."""

import json
from collections.abc import Mapping, Sequence
from typing import Any

from ..io.document import json_default

TEXT = "text"
JSON = "json"


def _scalar(value: Any) -> str:
    if isinstance(value, bool) or value is None:
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.6g}"
    if isinstance(value, complex):
        return f"{value.real:.6g}{value.imag:+.6g}j"
    return str(value)


def _is_flat(items: Sequence[Any]) -> bool:
    return all(not isinstance(x, (Mapping, list, tuple)) or _is_number_pair(x) for x in items)


def _is_number_pair(x: Any) -> bool:
    return isinstance(x, (list, tuple)) and len(x) == 2 and all(isinstance(v, (int, float)) for v in x)


def _lines(data: Any, indent: int) -> list[str]:
    pad = "  " * indent
    out: list[str] = []
    if isinstance(data, Mapping):
        for key, value in data.items():
            if isinstance(value, Mapping) and value:
                out.append(f"{pad}{key}:")
                out.extend(_lines(value, indent + 1))
            elif isinstance(value, (list, tuple)) and value and not _is_flat(value):
                out.append(f"{pad}{key}:")
                out.extend(_lines(value, indent + 1))
            else:
                out.append(f"{pad}{key}: {_inline(value)}")
    elif isinstance(data, (list, tuple)):
        for item in data:
            if isinstance(item, Mapping):
                nested = _lines(item, indent + 1)
                if nested:
                    out.append(f"{pad}- {nested[0].strip()}")
                    out.extend(nested[1:])
            else:
                out.append(f"{pad}- {_inline(item)}")
    else:
        out.append(f"{pad}{_scalar(data)}")
    return out


def _inline(value: Any) -> str:
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_inline(v) for v in value) + "]"
    if isinstance(value, Mapping):
        return "{}" if not value else json.dumps(value, sort_keys=True)
    return _scalar(value)


def render(data: Mapping[str, Any], output_format: str = TEXT, indent: int = 2) -> str:
    """Render a result dictionary as indented text or deterministic JSON."""
    if output_format == JSON:
        return json.dumps(data, indent=indent, sort_keys=True, default=json_default)
    return "\n".join(_lines(data, 0))
