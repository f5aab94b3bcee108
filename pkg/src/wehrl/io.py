"""JSON/CSV (de)serialization of states, point sets and reports.

Floats are written with 17 significant digits so every double round-trips.
"""
from __future__ import annotations

import csv
import io
import json
import math
from typing import Any, Sequence

import numpy as np

from .errors import WehrlError
from .majorana import MajoranaDecomposition, analyze, synthesize
from .spin import SpherePoint, SpinState, check_twice_j


class InputError(WehrlError):
    """Malformed input file."""


def format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def _encode(obj: Any, indent: int, level: int) -> str:
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(bool(obj) if obj is not None else None)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{" + pad + ("," + pad).join(items) + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        items = [_encode(v, indent, level + 1) for v in obj]
        if not items:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(items) + "]"
        return "[" + pad + ("," + pad).join(items) + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any, indent: int = 2) -> str:
    return _encode(obj, indent, 0) + "\n"


def loads(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        lines = text.splitlines()
        context = lines[exc.lineno - 1] if 0 < exc.lineno <= len(lines) else ""
        raise InputError(
            f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}\n    {context}\n    {' ' * (exc.colno - 1)}^"
        ) from None


# -- states and points ------------------------------------------------------

def state_to_json(state: SpinState) -> dict:
    return {"twice_j": state.twice_j, "amps": [[z.real, z.imag] for z in state.amps.tolist()]}


def _twice_j(obj: dict) -> int:
    if "twice_j" not in obj:
        raise InputError("missing field 'twice_j'")
    value = obj["twice_j"]
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"'twice_j' must be an integer, got {value!r}")
    return check_twice_j(value)


def _pairs(obj: dict, key: str) -> list[tuple[float, float]]:
    raw = obj.get(key)
    if not isinstance(raw, list):
        raise InputError(f"'{key}' must be a list of [x, y] pairs")
    out = []
    for i, pair in enumerate(raw):
        if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair)):
            raise InputError(f"'{key}'[{i}] must be a pair of numbers, got {pair!r}")
        out.append((float(pair[0]), float(pair[1])))
    return out


def state_from_json(obj: dict) -> SpinState:
    """Parse ``{"twice_j", "amps"}``; the state must already be normalized."""
    twice_j = _twice_j(obj)
    amps = [complex(re, im) for re, im in _pairs(obj, "amps")]
    return SpinState(twice_j, amps)


def points_to_json(twice_j: int, points: Sequence[SpherePoint]) -> dict:
    return {"twice_j": twice_j, "points": [[pt.theta, pt.phi] for pt in points]}


def points_from_json(obj: dict) -> tuple[int, list[SpherePoint]]:
    twice_j = _twice_j(obj)
    points = [SpherePoint(theta, phi) for theta, phi in _pairs(obj, "points")]
    return twice_j, points


def decomposition_to_json(decomp: MajoranaDecomposition) -> dict:
    out = points_to_json(decomp.twice_j, decomp.points)
    out["c"] = decomp.c
    return out


def read_state(text: str, source: str = "<input>") -> SpinState:
    """A state from either state JSON (``amps``) or point JSON (``points``)."""
    obj = loads(text, source)
    if not isinstance(obj, dict):
        raise InputError(f"{source}: expected a JSON object")
    if "amps" in obj:
        return state_from_json(obj)
    if "points" in obj:
        twice_j, points = points_from_json(obj)
        return synthesize(twice_j, points)[0]
    raise InputError(f"{source}: expected an 'amps' or 'points' field")


def read_points(text: str, source: str = "<input>") -> tuple[int, list[SpherePoint]]:
    obj = loads(text, source)
    if not isinstance(obj, dict):
        raise InputError(f"{source}: expected a JSON object")
    if "points" in obj:
        return points_from_json(obj)
    if "amps" in obj:
        decomp = analyze(state_from_json(obj))
        return decomp.twice_j, list(decomp.points)
    raise InputError(f"{source}: expected an 'amps' or 'points' field")


def sweep_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["eps", "entropy", "c_measured", "c_predicted", "ratio"])
    for row in rows:
        writer.writerow([format_float(v) for v in (row.eps, row.entropy, row.c_measured, row.c_predicted, row.ratio)])
    return buf.getvalue()
