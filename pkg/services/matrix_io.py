"""
Matrix file reading and writing.

Formats:
- CSV: one matrix row per line, comma-separated decimals, no header.
- JSON: {"dim": 2n, "matrix": [[...], ...]} for one matrix,
        {"matrices": [ ... ]} for several (items are nested lists or
        {"dim", "matrix"} objects). A previous Report whose result holds
        "matrices" is accepted too, so `gen` output can be fed back in.

CSV is parsed with pandas' round-trip float converter so both formats give
bit-identical values for the same decimal text.
"""

import io
import json
import sys
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from models.errors import MatrixFileError

# dense O(n³) kernels define the supported size envelope
MAX_DIM = 2000

FORMATS = ("csv", "json")


def infer_format(path: str, fmt: str | None = None) -> str:
    """Explicit format wins; otherwise use the file suffix."""
    if fmt:
        if fmt not in FORMATS:
            raise MatrixFileError(f"unknown format {fmt!r}; expected one of {FORMATS}")
        return fmt
    if path == "-":
        return "json"
    suffix = Path(path).suffix.lower().lstrip(".")
    if suffix in FORMATS:
        return suffix
    raise MatrixFileError(f"cannot infer format of {path!r}; pass --format csv|json")


def check_matrix(data: Any, label: str) -> np.ndarray:
    """Square, even-dimensional, finite, at most MAX_DIM."""
    try:
        arr = np.array(data, dtype=float)
    except (TypeError, ValueError) as e:
        raise MatrixFileError(f"{label}: not a numeric matrix ({e})") from e
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise MatrixFileError(f"{label}: matrix must be square, got shape {arr.shape}")
    dim = arr.shape[0]
    if dim == 0 or dim % 2:
        raise MatrixFileError(f"{label}: dimension must be even and positive, got {dim}")
    if dim > MAX_DIM:
        raise MatrixFileError(f"{label}: dimension {dim} exceeds the supported maximum {MAX_DIM}")
    if not np.all(np.isfinite(arr)):
        raise MatrixFileError(f"{label}: non-finite entries")
    return arr


def _read_csv(source: Any, label: str) -> list[np.ndarray]:
    try:
        df = pd.read_csv(
            source,
            header=None,
            dtype=float,
            float_precision="round_trip",
            skipinitialspace=True,
        )
    except (pd.errors.ParserError, pd.errors.EmptyDataError, ValueError) as e:
        raise MatrixFileError(f"{label}: cannot parse CSV ({e})") from e
    return [check_matrix(df.to_numpy(), label)]


def _entry_matrix(entry: Any, label: str) -> np.ndarray:
    if isinstance(entry, dict):
        if "matrix" not in entry:
            raise MatrixFileError(f"{label}: object without a 'matrix' field")
        arr = check_matrix(entry["matrix"], label)
        if "dim" in entry and int(entry["dim"]) != arr.shape[0]:
            raise MatrixFileError(f"{label}: 'dim' is {entry['dim']} but matrix is {arr.shape[0]}x{arr.shape[0]}")
        return arr
    return check_matrix(entry, label)


def parse_json(payload: Any, label: str) -> list[np.ndarray]:
    """Matrices from an already-decoded JSON value."""
    if isinstance(payload, dict):
        if "matrices" in payload:
            items = payload["matrices"]
        elif isinstance(payload.get("result"), dict) and "matrices" in payload["result"]:
            items = payload["result"]["matrices"]
        elif "matrix" in payload:
            return [_entry_matrix(payload, label)]
        else:
            raise MatrixFileError(f"{label}: expected 'matrix' or 'matrices'")
        if not isinstance(items, list) or not items:
            raise MatrixFileError(f"{label}: 'matrices' must be a non-empty list")
        return [_entry_matrix(item, f"{label}[{i}]") for i, item in enumerate(items)]
    if isinstance(payload, list):
        return [check_matrix(payload, label)]
    raise MatrixFileError(f"{label}: unsupported JSON document")


def load_matrices(path: str, fmt: str | None = None) -> list[np.ndarray]:
    """
    Read one or more matrices from a file ("-" reads standard input).

    Raises:
        MatrixFileError: unreadable file, parse error, or invalid matrix
    """
    fmt = infer_format(path, fmt)
    label = "<stdin>" if path == "-" else path
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as e:
        raise MatrixFileError(f"{label}: {e.strerror or e}") from e

    if fmt == "csv":
        return _read_csv(io.StringIO(text), label)
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise MatrixFileError(f"{label}: invalid JSON ({e})") from e
    return parse_json(payload, label)


def matrices_payload(matrices: list[np.ndarray]) -> dict:
    """JSON-ready multi-matrix document."""
    return {"matrices": [{"dim": int(m.shape[0]), "matrix": np.asarray(m).tolist()} for m in matrices]}


def write_matrices(matrices: list[np.ndarray], path: str, fmt: str | None = None) -> None:
    """Write matrices as JSON, or a single matrix as CSV."""
    fmt = infer_format(path, fmt)
    try:
        if fmt == "csv":
            if len(matrices) != 1:
                raise MatrixFileError(f"CSV holds exactly one matrix, got {len(matrices)}")
            pd.DataFrame(matrices[0]).to_csv(path, header=False, index=False)
        else:
            Path(path).write_text(json.dumps(matrices_payload(matrices), indent=2))
    except OSError as e:
        raise MatrixFileError(f"{path}: {e.strerror or e}") from e
