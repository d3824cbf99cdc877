"""Deterministic JSON serialization of module reports."""

import dataclasses
import json
import math

import numpy as np

from . import __version__
from .exceptions import RejectedInputError

__all__ = ["emit_report", "load_report", "to_jsonable"]


def to_jsonable(obj):
    """Plain JSON structure for dataclasses, numpy values and complex numbers.

    Complex numbers become ``[re, im]``; tuples become lists. Non-finite
    floats raise :class:`RejectedInputError`.
    """
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_finite(obj.real), _finite(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        return _finite(obj)
    if obj is None or isinstance(obj, str):
        return obj
    raise RejectedInputError(f"cannot serialize {type(obj).__name__}")


def _finite(x):
    x = float(x)
    if not math.isfinite(x):
        raise RejectedInputError(f"refusing to serialize non-finite number {x!r}")
    return x


def emit_report(report=None, kind=None, pretty=False):
    """Serialize ``report`` under a ``"report"`` key next to a ``"meta"`` block.

    Keys are sorted. Floats use Python's shortest round-trip repr, which is
    lossless (at most 17 significant digits).
    """
    body = {} if report is None else to_jsonable(report)
    meta = {"package": "qnet", "version": __version__}
    if kind is None and report is not None:
        kind = type(report).__name__
    if kind is not None:
        meta["kind"] = kind
    doc = {"meta": meta, "report": body}
    return json.dumps(doc, sort_keys=True, allow_nan=False, indent=2 if pretty else None,
                      separators=None if pretty else (",", ":"))


def load_report(text):
    doc = json.loads(text)
    return doc["meta"], doc["report"]
