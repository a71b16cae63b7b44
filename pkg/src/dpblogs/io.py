"""File formats: gradient CSV, model-spec JSON, and stable JSON output.

Gradient CSV holds one gradient per row as comma-separated decimal floats.
Shapes travel separately as JSON: one array of positive integers shared by
every row, or one such array per row.

``dumps`` writes floats with 12 significant digits (``%.12g``) instead of
Python's shortest round-trip repr, so golden outputs stay byte-identical
across platforms.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .accountant import ModelSpec
from .gradients import GradientVector

__all__ = [
    "format_float",
    "dumps",
    "read_gradient_csv",
    "write_gradient_csv",
    "parse_gradient_row",
    "load_model_spec",
    "load_shapes",
]


def format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".12g")


def _encode(obj: Any, indent: int | None, level: int) -> str:
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        items = [(json.dumps(str(k), ensure_ascii=False), v) for k, v in obj.items()]
        if not items:
            return "{}"
        if indent is None:
            return "{" + ", ".join(f"{k}: {_encode(v, None, 0)}" for k, v in items) + "}"
        pad = " " * indent * (level + 1)
        body = ",\n".join(f"{pad}{k}: {_encode(v, indent, level + 1)}" for k, v in items)
        return "{\n" + body + "\n" + " " * indent * level + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        # numeric lists stay on one line
        if indent is None or all(isinstance(v, (int, float, np.number)) for v in obj):
            return "[" + ", ".join(_encode(v, None, 0) for v in obj) + "]"
        pad = " " * indent * (level + 1)
        body = ",\n".join(f"{pad}{_encode(v, indent, level + 1)}" for v in obj)
        return "[\n" + body + "\n" + " " * indent * level + "]"
    raise TypeError(f"cannot encode {type(obj).__name__} as JSON")


def dumps(obj: Any, indent: int | None = 2) -> str:
    return _encode(obj, indent, 0)


def parse_gradient_row(text: str) -> list[float]:
    values = []
    for i, field in enumerate(text.split(",")):
        try:
            x = float(field)
        except ValueError:
            raise ValueError(f"column {i}: {field.strip()!r} is not a decimal float") from None
        if not math.isfinite(x):
            raise ValueError(f"column {i}: {field.strip()!r} is not finite")
        values.append(x)
    return values


def read_gradient_csv(source, shapes: Sequence[Sequence[int]] | None = None) -> list[GradientVector]:
    """Read gradients from a path or text stream, one per non-empty row.

    ``shapes`` is one shape per row, or a single shape shared by every row.
    """
    if isinstance(source, (str, Path)):
        text = Path(source).read_text()
    else:
        text = source.read()
    rows = [line for line in text.splitlines() if line.strip()]
    if shapes is not None and all(isinstance(n, (int, np.integer)) for n in shapes):
        shapes = [tuple(shapes)] * len(rows)
    if shapes is not None and len(shapes) != len(rows):
        raise ValueError(f"{len(shapes)} shapes given for {len(rows)} gradient rows")
    grads = []
    for r, line in enumerate(rows):
        try:
            vals = parse_gradient_row(line)
        except ValueError as exc:
            raise ValueError(f"gradient CSV row {r}: {exc}") from None
        shape = None if shapes is None else shapes[r]
        grads.append(GradientVector(vals, shape))
    return grads


def write_gradient_csv(grads: Sequence[GradientVector], dest=None) -> str:
    """Write one row per gradient with 17 significant digits; returns the text.

    Seventeen digits round-trip every double exactly while keeping a fixed
    format, unlike shortest-repr output.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for g in grads:
        writer.writerow([format(float(x), ".17g") for x in g.values])
    text = buf.getvalue()
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text)
    elif dest is not None:
        dest.write(text)
    return text


def load_model_spec(path) -> ModelSpec:
    return ModelSpec.from_json(Path(path).read_text())


def _is_shape(s) -> bool:
    return isinstance(s, list) and bool(s) and all(
        isinstance(n, int) and not isinstance(n, bool) and n > 0 for n in s
    )


def load_shapes(path):
    """Shape JSON: one array of positive integers, or one such array per row."""
    data = json.loads(Path(path).read_text())
    if _is_shape(data):
        return tuple(data)
    if isinstance(data, list) and data and all(_is_shape(s) for s in data):
        return [tuple(s) for s in data]
    raise ValueError("shape JSON must be an array of positive integers (or one per gradient row)")
