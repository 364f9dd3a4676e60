"""Deterministic report envelopes and their JSON / table renderings."""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from . import __version__
from .documents import spec_hash


def plain(obj: Any) -> Any:
    """Recursively convert numpy scalars, arrays and complex numbers to JSON values."""
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if np.isfinite(x):
            return x
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    return obj


def envelope(command: str, result: dict, *, passed: bool, group_spec: dict | None, tolerances: dict,
             seed: int | None) -> dict:
    return {
        "tool": "l1proj",
        "version": __version__,
        "command": command,
        "group_spec": group_spec,
        "group_spec_hash": None if group_spec is None else spec_hash(group_spec),
        "tolerances": tolerances,
        "seed": seed,
        "passed": bool(passed),
        "result": result,
    }


def to_json(report: dict) -> str:
    return json.dumps(plain(report), sort_keys=True, indent=2) + "\n"


def _flatten(prefix: str, obj: Any, out: list):
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], out)
    elif isinstance(obj, list) and obj and all(isinstance(v, dict) for v in obj):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        out.append((prefix, obj))


def to_table(report: dict) -> str:
    rows: list = []
    _flatten("", plain(report), rows)
    width = max((len(k) for k, _ in rows), default=0)
    lines = []
    for k, v in rows:
        if isinstance(v, float):
            v = f"{v:.6g}"
        elif not isinstance(v, str):
            v = json.dumps(v, sort_keys=True)
        lines.append(f"{k.ljust(width)}  {v}")
    return "\n".join(lines) + "\n"


def render(report: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "table":
        return to_table(report)
    raise ValueError(f"unknown format {fmt!r}")
