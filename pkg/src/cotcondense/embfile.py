"""Portable binary embedding-matrix files (.embm).

Layout, all little-endian:

    bytes 0..3   magic "EMBM"
    byte  4      format version (currently 1)
    bytes 5..12  unsigned 64-bit row count m
    bytes 13..20 unsigned 64-bit column count d
    then         m * d IEEE-754 float32 values, row-major
    then         unsigned 32-bit byte length L, then L bytes of UTF-8 JSON
                 metadata (model id, strategy, tau, dataset hash, ...)

Values are stored in 32-bit precision; readers widen to float64 since all
estimator arithmetic is 64-bit.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .errors import EmbFileError
from .mi import EmbeddingMatrix

MAGIC = b"EMBM"
VERSION = 1

_HEADER = struct.Struct("<QQ")
_META_LEN = struct.Struct("<I")


def write_embm(path: str | Path, data, meta: dict | None = None) -> None:
    """Write an m x d matrix with a JSON metadata blob."""
    arr = np.asarray(data)
    if arr.ndim != 2:
        raise EmbFileError(f"embedding matrix must be 2-D, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise EmbFileError("refusing to write non-finite embedding values")
    values = np.ascontiguousarray(arr, dtype="<f4")
    meta_bytes = json.dumps(meta or {}, ensure_ascii=False).encode("utf-8")
    with open(path, "wb") as handle:
        handle.write(MAGIC)
        handle.write(bytes([VERSION]))
        handle.write(_HEADER.pack(arr.shape[0], arr.shape[1]))
        handle.write(values.tobytes(order="C"))
        handle.write(_META_LEN.pack(len(meta_bytes)))
        handle.write(meta_bytes)


def read_embm(path: str | Path) -> EmbeddingMatrix:
    """Read an .embm file; returns float64 data plus the metadata dict."""
    blob = Path(path).read_bytes()
    if len(blob) < len(MAGIC) + 1 + _HEADER.size:
        raise EmbFileError(f"{path}: file too short for an .embm header")
    if blob[: len(MAGIC)] != MAGIC:
        raise EmbFileError(f"{path}: bad magic bytes {blob[:4]!r}")
    version = blob[len(MAGIC)]
    if version != VERSION:
        raise EmbFileError(f"{path}: unsupported format version {version}")
    offset = len(MAGIC) + 1
    m, d = _HEADER.unpack_from(blob, offset)
    offset += _HEADER.size
    payload = m * d * 4
    if len(blob) < offset + payload + _META_LEN.size:
        raise EmbFileError(f"{path}: truncated payload (expected {m}x{d} float32)")
    values = np.frombuffer(blob, dtype="<f4", count=m * d, offset=offset)
    offset += payload
    (meta_len,) = _META_LEN.unpack_from(blob, offset)
    offset += _META_LEN.size
    if len(blob) < offset + meta_len:
        raise EmbFileError(f"{path}: truncated metadata blob")
    try:
        meta = json.loads(blob[offset : offset + meta_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise EmbFileError(f"{path}: metadata is not valid UTF-8 JSON: {exc}") from exc
    data = values.reshape(m, d).astype(np.float64)
    return EmbeddingMatrix(data=data, meta=meta)


def describe_embm(path: str | Path) -> dict:
    """Header check used by the `mi validate` subcommand."""
    matrix = read_embm(path)
    return {
        "path": str(path),
        "version": VERSION,
        "m": matrix.m,
        "d": matrix.d,
        "meta": matrix.meta,
        "valid": True,
    }
