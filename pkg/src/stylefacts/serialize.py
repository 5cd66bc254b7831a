"""Deterministic text encoding shared by all CSV and JSON emitters.

Floats are written with 17 significant digits so that every emitted value
round-trips to the exact same float64, which makes repeated runs on the
same input byte-identical.
"""

import json

import numpy as np


def fmt_float(value) -> str:
    """Render a float with 17 significant digits (exact float64 round trip)."""
    v = float(value)
    if not np.isfinite(v):
        raise ValueError(f"cannot serialize non-finite value {v!r}")
    return format(v, ".17g")


def _encode(obj, indent: int, out: list) -> None:
    pad = "  " * indent
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool) or isinstance(obj, np.bool_):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(fmt_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, val) in enumerate(obj.items()):
            out.append(f"{pad}  {json.dumps(str(key))}: ")
            _encode(val, indent + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            out.append("[]")
            return
        out.append("[")
        for i, val in enumerate(items):
            _encode(val, indent, out)
            if i < len(items) - 1:
                out.append(", ")
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def json_dumps(obj) -> str:
    """JSON with insertion-ordered keys and 17-digit floats, for stable output."""
    out: list = []
    _encode(obj, 0, out)
    out.append("\n")
    return "".join(out)


def write_json(obj, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(json_dumps(obj))
