"""Text encoders with fixed float formatting (17 significant digits).

The stdlib ``json`` module prints the shortest round-trip repr, which is not
what downstream consumers diff against, so floats are formatted here.
"""

from __future__ import annotations

import json
import math
from typing import Any, Iterable, Sequence


def format_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite float {x!r}")
    if x == 0.0:
        # fold -0.0 so tables do not flicker between "0" and "-0"
        return "0"
    return format(x, ".17g")


def _encode(obj: Any, indent: int, level: int) -> str:
    pad = "\n" + " " * (indent * (level + 1)) if indent else ""
    end = "\n" + " " * (indent * level) if indent else ""
    sep = "," + pad if indent else ", "
    if obj is None or isinstance(obj, (bool, str)):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if hasattr(obj, "item") and not isinstance(obj, (list, tuple, dict)):
        # numpy scalar
        return _encode(obj.item(), indent, level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = (f"{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items())
        return "{" + pad + sep.join(items) + end + "}"
    if isinstance(obj, (list, tuple)) or hasattr(obj, "tolist"):
        seq = obj.tolist() if hasattr(obj, "tolist") else obj
        if not seq:
            return "[]"
        # short numeric rows stay on one line
        if all(isinstance(v, (int, float)) for v in seq):
            return "[" + ", ".join(_encode(v, 0, 0) for v in seq) + "]"
        return "[" + pad + sep.join(_encode(v, indent, level + 1) for v in seq) + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any, indent: int = 2) -> str:
    return _encode(obj, indent, 0)


def format_cell(value: Any) -> str:
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def csv_lines(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> list[str]:
    """CSV without quoting; every cell here is numeric or a bare identifier."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_cell(v) for v in row))
    return lines
