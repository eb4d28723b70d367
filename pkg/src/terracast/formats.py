"""Binary and report file formats, config hashing, worker configuration.

TCR raster format (bit-exact, no image-codec dependency):
    magic ``TCR1`` |  u32 LE width | u32 LE height | u32 LE channels |
    f32 LE pixel data, row-major, channel-interleaved (H, W, C) |
    u64 LE checksum of the pixel payload (BLAKE2b-64).

Weights file format:
    magic ``TCW1`` | u32 LE header length | UTF-8 JSON header
    (network name, class count, layer list, parameter shapes) |
    f64 LE parameter blocks in layer order | u64 LE checksum of the blocks.

Reports are line-delimited JSON; every CLI run embeds a config hash so that
identical (hash, seed) runs are byte-identical.
"""

from __future__ import annotations

import hashlib
import json
import os
import struct
from pathlib import Path
from typing import Any, Sequence

import numpy as np

TCR_MAGIC = b"TCR1"
TCW_MAGIC = b"TCW1"


def _checksum64(payload: bytes) -> int:
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "little")


def write_raster(path: str | Path, data: np.ndarray) -> None:
    """Write a (C, H, W) or (H, W) float array as a TCR file."""
    if data.ndim == 2:
        data = data[None, :, :]
    if data.ndim != 3:
        raise ValueError(f"raster must be 2-D or 3-D, got shape {data.shape}")
    c, h, w = data.shape
    interleaved = np.ascontiguousarray(np.transpose(data, (1, 2, 0)).astype("<f4"))
    payload = interleaved.tobytes()
    with Path(path).open("wb") as fh:
        fh.write(TCR_MAGIC)
        fh.write(struct.pack("<III", w, h, c))
        fh.write(payload)
        fh.write(struct.pack("<Q", _checksum64(payload)))


def read_raster(path: str | Path) -> np.ndarray:
    """Read a TCR file back to a (C, H, W) float32 array; verifies checksum."""
    raw = Path(path).read_bytes()
    if raw[:4] != TCR_MAGIC:
        raise ValueError(f"{path}: not a TCR raster (bad magic)")
    w, h, c = struct.unpack("<III", raw[4:16])
    n = w * h * c * 4
    payload = raw[16 : 16 + n]
    if len(payload) != n or len(raw) < 16 + n + 8:
        raise ValueError(f"{path}: truncated raster")
    (stored,) = struct.unpack("<Q", raw[16 + n : 16 + n + 8])
    if stored != _checksum64(payload):
        raise ValueError(f"{path}: raster checksum mismatch")
    arr = np.frombuffer(payload, dtype="<f4").reshape(h, w, c)
    return np.ascontiguousarray(np.transpose(arr, (2, 0, 1)))


def params_checksum(params: Sequence[np.ndarray]) -> str:
    """Hex digest over parameter blocks serialized as f64 LE in order."""
    h = hashlib.blake2b(digest_size=16)
    for p in params:
        h.update(np.ascontiguousarray(p, dtype="<f8").tobytes())
    return h.hexdigest()


def write_weights(path: str | Path, header: dict[str, Any], params: Sequence[np.ndarray]) -> None:
    """Write parameter blocks plus a JSON header describing the network."""
    header = dict(header)
    header["param_shapes"] = [list(p.shape) for p in params]
    blocks = b"".join(np.ascontiguousarray(p, dtype="<f8").tobytes() for p in params)
    head = json.dumps(header, sort_keys=True).encode("utf-8")
    with Path(path).open("wb") as fh:
        fh.write(TCW_MAGIC)
        fh.write(struct.pack("<I", len(head)))
        fh.write(head)
        fh.write(blocks)
        fh.write(struct.pack("<Q", _checksum64(blocks)))


def read_weights(path: str | Path) -> tuple[dict[str, Any], list[np.ndarray]]:
    raw = Path(path).read_bytes()
    if raw[:4] != TCW_MAGIC:
        raise ValueError(f"{path}: not a weights file (bad magic)")
    (head_len,) = struct.unpack("<I", raw[4:8])
    header = json.loads(raw[8 : 8 + head_len].decode("utf-8"))
    shapes = [tuple(s) for s in header["param_shapes"]]
    offset = 8 + head_len
    params = []
    for shape in shapes:
        n = int(np.prod(shape)) * 8
        block = raw[offset : offset + n]
        if len(block) != n:
            raise ValueError(f"{path}: truncated parameter block")
        params.append(np.frombuffer(block, dtype="<f8").reshape(shape).copy())
        offset += n
    (stored,) = struct.unpack("<Q", raw[offset : offset + 8])
    blocks = raw[8 + head_len : offset]
    if stored != _checksum64(blocks):
        raise ValueError(f"{path}: weights checksum mismatch")
    return header, params


def config_hash(config: Any) -> str:
    """Stable hash of a JSON-serializable configuration object."""
    canon = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.blake2b(canon.encode("utf-8"), digest_size=8).hexdigest()


def write_report(path: str | Path, records: Sequence[dict[str, Any]]) -> None:
    """Write records as line-delimited JSON (one object per line)."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True, default=str))
            fh.write("\n")


def read_report(path: str | Path) -> list[dict[str, Any]]:
    out = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(json.loads(line))
    return out


def render_table(title: str, columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    """Plain-text table rendering used for the human-readable result layouts."""
    cells = [[str(c) for c in columns]] + [[str(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(columns))]
    sep = "-+-".join("-" * w for w in widths)
    lines = [title]
    for j, row in enumerate(cells):
        lines.append(" | ".join(v.ljust(widths[i]) for i, v in enumerate(row)))
        if j == 0:
            lines.append(sep)
    return "\n".join(lines)


def worker_count() -> int:
    """Worker-parallelism cap from TERRACAST_THREADS (default 1)."""
    raw = os.environ.get("TERRACAST_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)
