"""Deterministic serialization helpers for report files.

Floats are rounded to 12 significant digits before JSON encoding so that
reruns (including parallel ones) produce byte-identical files. NaN is
mapped to null: it only appears for statistics that are undefined at the
configured replication count, and the reports flag those in prose.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

__all__ = ["round_floats", "json_text", "write_json"]


def round_floats(obj):
    """Recursively round floats to 12 significant digits; NaN becomes None."""
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        if math.isnan(obj):
            return None
        if math.isinf(obj):
            raise ValueError("refusing to serialize an infinite value")
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v) for v in obj]
    return obj


def json_text(obj) -> str:
    return json.dumps(round_floats(obj), indent=2) + "\n"


def write_json(obj, path: str | Path) -> None:
    Path(path).write_text(json_text(obj), encoding="ascii")
