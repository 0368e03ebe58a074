"""Structured text reports with a stable layout."""

from __future__ import annotations

import json
import math
import os
from typing import Any

import numpy as np

SCHEMA = "p2dyn-report/1"


def _clean(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def render(kind: str, payload: dict) -> str:
    body = {"schema": SCHEMA, "kind": kind}
    body.update(_clean(payload))
    return json.dumps(body, sort_keys=True, indent=2, allow_nan=False) + "\n"


def emit(path, kind: str, payload: dict) -> str:
    """Write a report; identical payloads give byte-identical files."""
    text = render(kind, payload)
    d = os.path.dirname(os.fspath(path))
    if d:
        os.makedirs(d, exist_ok=True)
    with open(path, "w") as fh:
        fh.write(text)
    return os.fspath(path)
