"""CSV and JSON emission and the ``key = value`` quadrature config file."""

from __future__ import annotations

import csv
import dataclasses
import enum
import io
import json
import math
import os
from typing import Any

import numpy as np

from .collision import IntegralResult, QuadratureConfig
from .observations import Interval, ObservationRecord, _hi, _lo
from .zero_curve import CurvePoint, GridField

SIG = 9


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.{SIG}g}"
    return str(v)


def _obs_rows(records):
    header = ["name", "a_lo", "a_hi", "b_lo", "b_hi", "basis", "x_lo", "x_hi", "y_lo", "y_hi", "notes"]
    rows = []
    for r in records:
        b = r.b
        rows.append(
            [
                r.name,
                _lo(r.a),
                _hi(r.a),
                None if b is None else _lo(b),
                None if b is None else _hi(b),
                r.basis.value,
                _lo(r.derived_x),
                _hi(r.derived_x),
                _lo(r.derived_y),
                _hi(r.derived_y),
                r.notes,
            ]
        )
    return header, rows


def _curve_rows(curve):
    header = ["x", "y", "normalized_residual", "bracket_width", "status", "offset_lo", "offset_hi"]
    rows = []
    for p in curve:
        off = p.offset_residuals or (None, None)
        rows.append([p.x, p.y, p.normalized_residual, p.bracket_width, p.status, off[0], off[1]])
    return header, rows


def _grid_rows(grid: GridField):
    header = ["x", "y", "value", "status", "reference_scale"]
    rows = []
    for j, y in enumerate(grid.y_axis):
        for i, x in enumerate(grid.x_axis):
            rows.append([x, y, grid.values[j, i], grid.status[j, i], grid.reference[j, i]])
    return header, rows


def _table(data):
    if isinstance(data, GridField):
        return _grid_rows(data)
    data = list(data)
    if not data:
        raise ValueError("nothing to emit: data is empty")
    if isinstance(data[0], ObservationRecord):
        return _obs_rows(data)
    if isinstance(data[0], CurvePoint):
        return _curve_rows(data)
    raise TypeError(f"cannot emit {type(data[0]).__name__} as CSV")


def emit_csv(data, destination=None) -> bytes:
    """UTF-8 CSV with a header row and LF line endings.

    ``destination`` may be a path, a binary or text stream, or ``None`` to
    only return the bytes.
    """
    header, rows = _table(data)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    out = buf.getvalue().encode("utf-8")
    _write(out, destination)
    return out


def _write(out: bytes, destination):
    if destination is None:
        return
    if isinstance(destination, (str, os.PathLike)):
        with open(destination, "wb") as fh:
            fh.write(out)
    elif isinstance(destination, io.TextIOBase):
        destination.write(out.decode("utf-8"))
    else:
        destination.write(out)


def parse_csv(text: str | bytes) -> list[dict[str, Any]]:
    """Read emitted CSV back; numeric cells become floats, empty cells None."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        rec = {}
        for k, v in row.items():
            if v == "":
                rec[k] = None
                continue
            try:
                rec[k] = float(v)
            except ValueError:
                rec[k] = v
        out.append(rec)
    return out


def _jsonable(v):
    if isinstance(v, Interval):
        return {"lo": v.lo, "hi": v.hi}
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, enum.Enum):
        return v.value
    if dataclasses.is_dataclass(v):
        return {f.name: _jsonable(getattr(v, f.name)) for f in dataclasses.fields(v)}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


def to_json_obj(data) -> dict:
    if isinstance(data, IntegralResult):
        return _jsonable(data.to_dict())
    if isinstance(data, GridField):
        return {
            "x_axis": data.x_axis.tolist(),
            "y_axis": data.y_axis.tolist(),
            "values": data.values.tolist(),
            "status": data.status.tolist(),
            "reference_scale": data.reference.tolist(),
            "regularized": data.regularized,
        }
    data = list(data)
    if data and isinstance(data[0], CurvePoint):
        return {"curve": _jsonable(data), "diagnostics": list(getattr(data, "diagnostics", []))}
    if data and isinstance(data[0], ObservationRecord):
        return {"observations": _jsonable(data)}
    raise ValueError("nothing to emit: data is empty or of an unknown type")


def emit_json(data, destination=None, extra: dict | None = None) -> bytes:
    obj = to_json_obj(data)
    if extra:
        obj.update(_jsonable(extra))
    out = (json.dumps(obj, indent=2, allow_nan=False) + "\n").encode("utf-8")
    _write(out, destination)
    return out


_CFG_TYPES = {f.name: f.type for f in dataclasses.fields(QuadratureConfig)}


def parse_config(text: str, origin: str = "<config>") -> QuadratureConfig:
    """``key = value`` lines for QuadratureConfig fields; ``#`` starts a comment."""
    kw: dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{origin}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, val = (t.strip() for t in line.split("=", 1))
        if key not in _CFG_TYPES:
            raise ValueError(f"{origin}:{lineno}: unknown key {key!r}; known keys: {', '.join(_CFG_TYPES)}")
        if key in kw:
            raise ValueError(f"{origin}:{lineno}: duplicate key {key!r}")
        try:
            kw[key] = int(val) if _CFG_TYPES[key] in (int, "int") else float(val)
        except ValueError:
            raise ValueError(f"{origin}:{lineno}: bad value for {key}: {val!r}") from None
    return QuadratureConfig(**kw)


def load_config(path) -> QuadratureConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), str(path))
