"""Field snapshots: a small binary format and a CSV export.

Binary layout (all little-endian)::

    offset  size  content
    0       4     magic b"FSF1"
    4       4     u32 dim
    8       4     u32 N (points per axis)
    12      4     u32 flags; bit 0 set = complex values
    16      8     f64 L (side length), the header extension
    24      ...   f64 values, row-major over the N^d grid points;
                  complex values are stored as interleaved (re, im) pairs

CSV export has one row per grid point: index columns ``i0`` (and ``i1`` for
d=2) followed by ``value`` (real fields) or ``real, imag`` (complex fields).
"""

from __future__ import annotations

import csv
import struct
from pathlib import Path

import numpy as np

from .spectral_core import RealField, TorusGrid

MAGIC = b"FSF1"
_HEADER = struct.Struct("<4sIII")
_LENGTH = struct.Struct("<d")
FLAG_COMPLEX = 1


class SnapshotFormatError(ValueError):
    pass


def to_bytes(field: RealField) -> bytes:
    g = field.grid
    is_complex = np.iscomplexobj(field.values)
    header = _HEADER.pack(MAGIC, g.dim, g.points_per_axis, FLAG_COMPLEX if is_complex else 0)
    values = field.values.astype(np.complex128 if is_complex else np.float64)
    if is_complex:
        payload = values.view(np.float64)
    else:
        payload = values
    return header + _LENGTH.pack(g.side_length) + payload.astype("<f8").tobytes(order="C")


def from_bytes(data: bytes) -> RealField:
    if len(data) < _HEADER.size + _LENGTH.size:
        raise SnapshotFormatError("truncated header")
    magic, dim, n, flags = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise SnapshotFormatError(f"bad magic {magic!r}")
    (length,) = _LENGTH.unpack_from(data, _HEADER.size)
    grid = TorusGrid(dim, n, length)
    is_complex = bool(flags & FLAG_COMPLEX)
    count = grid.size * (2 if is_complex else 1)
    body = np.frombuffer(data, dtype="<f8", offset=_HEADER.size + _LENGTH.size)
    if body.size != count:
        raise SnapshotFormatError(f"expected {count} values, found {body.size}")
    values = body.astype(np.float64)
    if is_complex:
        values = values.view(np.complex128)
    return RealField(grid, values.reshape(grid.shape))


def write_snapshot(path, field: RealField) -> None:
    Path(path).write_bytes(to_bytes(field))


def read_snapshot(path) -> RealField:
    return from_bytes(Path(path).read_bytes())


def write_csv(path, field: RealField) -> None:
    g = field.grid
    is_complex = np.iscomplexobj(field.values)
    index_cols = [f"i{a}" for a in range(g.dim)]
    value_cols = ["real", "imag"] if is_complex else ["value"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(index_cols + value_cols)
        for idx in np.ndindex(*g.shape):
            v = field.values[idx]
            vals = [repr(float(v.real)), repr(float(v.imag))] if is_complex else [repr(float(v))]
            w.writerow([*idx, *vals])


def read_csv(path, grid: TorusGrid) -> RealField:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    head, body = rows[0], rows[1:]
    is_complex = head[-2:] == ["real", "imag"]
    values = np.zeros(grid.shape, dtype=complex if is_complex else float)
    for row in body:
        idx = tuple(int(c) for c in row[: grid.dim])
        if is_complex:
            values[idx] = complex(float(row[-2]), float(row[-1]))
        else:
            values[idx] = float(row[-1])
    return RealField(grid, values)
