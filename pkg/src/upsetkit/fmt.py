"""Deterministic numeric formatting for machine-readable output.

All emitted numbers go through %.12g (12 significant digits, round half
to even), so identical runs produce byte-identical JSON and CSV.
"""

from __future__ import annotations

import json
from typing import Any


def sig12(x: float) -> str:
    return f"{x:.12g}"


def json_ready(value: Any) -> Any:
    """Recursively round floats to 12 significant digits for JSON dumps."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, float):
        return float(sig12(value))
    if isinstance(value, dict):
        return {k: json_ready(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_ready(v) for v in value]
    return value


def dumps(value: Any) -> str:
    return json.dumps(json_ready(value), separators=(", ", ": "))


def csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return sig12(value)
    return str(value)
