"""Deterministic JSON reports.

Keys are sorted, floats are rounded to 12 significant digits, complex
numbers become ``[re, im]`` pairs and exact scalars become strings, so equal
inputs give byte-identical output.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from . import __version__
from .scalars import ExactComplex, format_scalar


class ReportIOError(OSError):
    """Writing a report failed."""


def _float(x: float):
    if math.isnan(x) or math.isinf(x):
        return str(x)
    y = float("%.12g" % x)
    return 0.0 if y == 0 else y


def normalize(obj):
    """Convert results into plain JSON types with fixed float formatting."""
    if isinstance(obj, dict):
        return {str(k): normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [normalize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return normalize(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        if z.imag == 0:
            return _float(z.real)
        return [_float(z.real), _float(z.imag)]
    if isinstance(obj, ExactComplex):
        return format_scalar(obj)
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "to_json"):
        return normalize(obj.to_json())
    return str(obj)


def build_report(command: str, config: dict, results, failures) -> dict:
    return normalize({
        "tool": "qgw",
        "version": __version__,
        "command": command,
        "config": config,
        "results": results,
        "failures": list(failures),
        "ok": not failures,
    })


def dumps(doc) -> str:
    return json.dumps(normalize(doc), sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def emit_report(doc, out=None) -> str:
    """Serialize ``doc``; write it to ``out`` when given.  Returns the text."""
    text = dumps(doc)
    if out is not None:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise ReportIOError(f"cannot write report to {out}: {exc.strerror or exc}") from None
    return text


def summary_lines(doc) -> list:
    """Short human-readable summary of a report."""
    lines = [f"qgw {doc['version']} {doc['command']}: {'ok' if doc['ok'] else 'FAILED'}"]
    for f in doc["failures"]:
        lines.append(f"  failure: {f}")
    return lines
