"""Writer (and read-back) for the portable .embm embedding-matrix format.

This package only produces the files; the condensation toolkit consumes
them. The byte contract, all little-endian:

    "EMBM" | version u8 (=1) | m u64 | d u64 | m*d float32 row-major |
    metadata byte length u32 | UTF-8 JSON metadata

Implemented here against that contract, independently of the consumer.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .errors import EmbedError

MAGIC = b"EMBM"
VERSION = 1


def write_embm(path: str | Path, matrix: np.ndarray, meta: dict | None = None) -> None:
    arr = np.asarray(matrix)
    if arr.ndim != 2:
        raise EmbedError(f"matrix must be 2-D, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise EmbedError("matrix contains non-finite values")
    m, d = arr.shape
    meta_blob = json.dumps(meta or {}, ensure_ascii=False).encode("utf-8")
    header = MAGIC + struct.pack("<BQQ", VERSION, m, d)
    with open(path, "wb") as out:
        out.write(header)
        out.write(arr.astype("<f4", copy=False).tobytes(order="C"))
        out.write(struct.pack("<I", len(meta_blob)))
        out.write(meta_blob)


def read_embm(path: str | Path) -> tuple[np.ndarray, dict]:
    """Read-back used by this package's own tests; returns (float32 data, meta)."""
    raw = Path(path).read_bytes()
    if raw[:4] != MAGIC:
        raise EmbedError(f"{path}: not an .embm file")
    version, m, d = struct.unpack_from("<BQQ", raw, 4)
    if version != VERSION:
        raise EmbedError(f"{path}: unsupported version {version}")
    offset = 4 + 1 + 16
    data = np.frombuffer(raw, dtype="<f4", count=m * d, offset=offset).reshape(m, d)
    offset += m * d * 4
    (meta_len,) = struct.unpack_from("<I", raw, offset)
    meta = json.loads(raw[offset + 4 : offset + 4 + meta_len].decode("utf-8"))
    return data, meta
