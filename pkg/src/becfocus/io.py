"""Structured output writers with provenance, and the raw wave-function format.

Every CSV carries provenance header comments and every JSON document embeds
the same fields, so any output file can be traced back to its exact
configuration.  Floats print with 9 significant digits for reproducible
diffs.

Wave-function cache files are little-endian binary: magic "GPEF", u32
version, u64 point count, then that many (real, imag) float64 pairs.
"""

from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path

import numpy as np

TOOL_NAME = "becfocus"
TOOL_VERSION = "0.1.0"
_MAGIC = b"GPEF"
_FORMAT_VERSION = 1


def config_hash(config: dict) -> str:
    """Stable short hash of a JSON-serializable configuration dict."""
    blob = json.dumps(config, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def provenance(cfg_hash: str) -> dict:
    return {"tool": TOOL_NAME, "version": TOOL_VERSION, "config_hash": cfg_hash}


def format_float(x: float) -> str:
    return f"{x:.9g}"


def write_csv(path: Path | str, columns: dict[str, np.ndarray], cfg_hash: str,
              extra_comments: list[str] | None = None) -> None:
    """Column-oriented CSV with '#' provenance comments and 9-digit floats."""
    path = Path(path)
    names = list(columns)
    arrays = [np.asarray(columns[k]) for k in names]
    length = arrays[0].shape[0]
    if any(a.shape[0] != length for a in arrays):
        raise ValueError("all CSV columns must have equal length")
    lines = [f"# {TOOL_NAME} {TOOL_VERSION}", f"# config_hash: {cfg_hash}"]
    lines.extend(f"# {c}" for c in (extra_comments or []))
    lines.append(",".join(names))
    for i in range(length):
        lines.append(",".join(format_float(float(a[i])) for a in arrays))
    path.write_text("\n".join(lines) + "\n")


def write_matrix_csv(path: Path | str, row_axis: np.ndarray, matrix: np.ndarray,
                     cfg_hash: str, comment: str = "") -> None:
    """Dense matrix CSV: first column the row coordinate, then one column per grid column."""
    path = Path(path)
    lines = [f"# {TOOL_NAME} {TOOL_VERSION}", f"# config_hash: {cfg_hash}"]
    if comment:
        lines.append(f"# {comment}")
    for coord, row in zip(row_axis, matrix):
        lines.append(",".join([format_float(float(coord))]
                              + [format_float(float(v)) for v in row]))
    path.write_text("\n".join(lines) + "\n")


def _sanitize(obj):
    """Map non-finite floats to None so documents stay strict JSON."""
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, (float, np.floating)) and not np.isfinite(obj):
        return None
    return obj


def write_json(path: Path | str, payload: dict, cfg_hash: str) -> None:
    doc = dict(provenance(cfg_hash))
    doc.update(_sanitize(payload))
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True,
                                     default=_json_default) + "\n")


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_wavefunction(path: Path | str, values: np.ndarray) -> None:
    flat = np.ascontiguousarray(values, dtype=np.complex128).ravel()
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<I", _FORMAT_VERSION))
        fh.write(struct.pack("<Q", flat.size))
        pairs = np.empty(2 * flat.size, dtype="<f8")
        pairs[0::2] = flat.real
        pairs[1::2] = flat.imag
        fh.write(pairs.tobytes())


def read_wavefunction(path: Path | str) -> np.ndarray:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _MAGIC:
            raise ValueError(f"{path}: not a wave-function cache file")
        (version,) = struct.unpack("<I", fh.read(4))
        if version != _FORMAT_VERSION:
            raise ValueError(f"{path}: unsupported format version {version}")
        (count,) = struct.unpack("<Q", fh.read(8))
        pairs = np.frombuffer(fh.read(16 * count), dtype="<f8")
        if pairs.size != 2 * count:
            raise ValueError(f"{path}: truncated payload")
    return (pairs[0::2] + 1j * pairs[1::2]).astype(np.complex128)
