"""Deterministic text encodings: sorted-key JSON with 17-significant-digit floats."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .averaging import ResonanceTerm


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            raise ValueError("non-finite float in JSON output")
        return format(x, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(k))}: {_encode(obj[k], indent, level + 1)}"
            for k in sorted(obj, key=str)
        ]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        # short scalar lists (e.g. [re, im]) stay on one line
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj) and len(obj) <= 4:
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    return _encode(obj, indent, 0) + "\n"


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj))


def read_json(path):
    return json.loads(Path(path).read_text())


def terms_csv(terms: list[ResonanceTerm]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["label", "tuple", "re", "im", "k_total"])
    for term in terms:
        writer.writerow([
            term.target_label,
            " ".join("-" if u is None else u for u in term.tuple_labels),
            format(term.coefficient.real, ".17g"),
            format(term.coefficient.imag, ".17g"),
            term.total_freq_index,
        ])
    return buf.getvalue()
