"""
CIQF binary field files.

Layout (all little-endian)::

    offset  size  content
    0       4     magic b"CIQF"
    4       4     u32 version (= 1)
    8       4     u32 n_points (odd, >= 3)
    12      8     f64 spacing
    20      4     u32 n_components (1 or 3)
    24      ...   n_components * n_points**3 f64 values, component-major,
                  sites in x1-fastest order

I/O failures surface as the builtin ``OSError``.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from ciq.errors import FormatError
from ciq.lattice import LatticeGrid, ScalarField, VectorField

MAGIC = b"CIQF"
VERSION = 1
_HEADER = struct.Struct("<4sIIdI")
HEADER_SIZE = _HEADER.size  # 24


def encode_field(f: ScalarField | VectorField) -> bytes:
    g = f.grid
    ncomp = 3 if isinstance(f, VectorField) else 1
    header = _HEADER.pack(MAGIC, VERSION, g.n_points, g.spacing, ncomp)
    return header + np.ascontiguousarray(f.values, dtype="<f8").tobytes()


def decode_field(data: bytes) -> ScalarField | VectorField:
    if len(data) < 4 or data[:4] != MAGIC:
        raise FormatError("bad magic, expected b'CIQF'", 0)
    if len(data) < HEADER_SIZE:
        raise FormatError("truncated header", len(data))
    _, version, n, spacing, ncomp = _HEADER.unpack_from(data)
    if version != VERSION:
        raise FormatError(f"unsupported version {version}", 4)
    if n < 3 or n % 2 == 0:
        raise FormatError(f"n_points must be odd and >= 3, got {n}", 8)
    if not (np.isfinite(spacing) and spacing > 0):
        raise FormatError(f"spacing must be positive, got {spacing}", 12)
    if ncomp not in (1, 3):
        raise FormatError(f"n_components must be 1 or 3, got {ncomp}", 20)
    expected = HEADER_SIZE + 8 * ncomp * n**3
    if len(data) < expected:
        raise FormatError(f"truncated payload: need {expected} bytes, have {len(data)}", len(data))
    if len(data) > expected:
        raise FormatError(f"{len(data) - expected} trailing bytes", expected)
    values = np.frombuffer(data, dtype="<f8", offset=HEADER_SIZE).astype(float)
    if not np.all(np.isfinite(values)):
        bad = int(np.argmax(~np.isfinite(values)))
        raise FormatError("non-finite value", HEADER_SIZE + 8 * bad)
    grid = LatticeGrid(n, spacing)
    if ncomp == 1:
        return ScalarField(grid, values)
    return VectorField.from_array(grid, values.reshape(3, -1))


def write_field_file(path, f: ScalarField | VectorField) -> None:
    Path(path).write_bytes(encode_field(f))


def read_field_file(path) -> ScalarField | VectorField:
    return decode_field(Path(path).read_bytes())
