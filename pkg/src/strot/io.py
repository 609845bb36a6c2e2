"""Binary field files and JSON/CSV report helpers.

Field file layout (little endian)::

    magic        4 bytes  b"STRF"
    version      u32      1
    n_time       u32
    n_space      u32
    n_components u32
    box_len      f64
    period       f64
    domain       u8       0 = physical, 1 = spectral
    payload      (re, im) float64 pairs in index order (t|k, x1, x2, x3, component)
"""

from __future__ import annotations

import csv
import json
import struct
from dataclasses import asdict, is_dataclass
from pathlib import Path

import numpy as np

from strot.errors import FieldShapeError
from strot.grid import GridSpec, PhysicalField, SpectralField

MAGIC = b"STRF"
VERSION = 1
_HEADER = struct.Struct("<4sIIIIddB")


def write_field(path, field: PhysicalField | SpectralField) -> None:
    grid = field.grid
    if isinstance(field, SpectralField):
        domain, data = 1, field.coeffs
    else:
        domain, data = 0, field.samples
    header = _HEADER.pack(
        MAGIC,
        VERSION,
        grid.n_time,
        grid.n_space,
        data.shape[-1],
        float(grid.box_len),
        float(grid.period),
        domain,
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(data, dtype="<c16").tobytes())


def read_field(path) -> PhysicalField | SpectralField:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise FieldShapeError(f"{path}: file too short for a field header")
    magic, version, n_time, n_space, n_comp, box_len, period, domain = _HEADER.unpack(
        raw[: _HEADER.size]
    )
    if magic != MAGIC:
        raise FieldShapeError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise FieldShapeError(f"{path}: unsupported version {version}")
    grid = GridSpec(period, box_len, n_space, n_time)
    payload = np.frombuffer(raw, dtype="<c16", offset=_HEADER.size)
    expected = int(np.prod(grid.shape(n_comp)))
    if payload.size != expected:
        raise FieldShapeError(
            f"{path}: payload holds {payload.size} values, expected {expected}"
        )
    data = payload.reshape(grid.shape(n_comp)).astype(complex)
    if domain == 1:
        return SpectralField(grid, data)
    if domain == 0:
        return PhysicalField(grid, data)
    raise FieldShapeError(f"{path}: unknown domain flag {domain}")


def _jsonable(obj):
    if is_dataclass(obj) and not isinstance(obj, type):
        return _jsonable(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n")


def read_json(path):
    return json.loads(Path(path).read_text())


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
