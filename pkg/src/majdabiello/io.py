"""CSV tables with unit headers and JSON run manifests."""

from __future__ import annotations

import csv
import json
import platform
from importlib import metadata
from pathlib import Path

import numpy as np
import scipy

from .errors import ValidationError

FLOAT_FORMAT = "%.17g"


def _cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return FLOAT_FORMAT % float(value)
    return str(value)


def write_csv(path, columns: dict) -> Path:
    """Write equal-length columns; keys are headers of the form 'symbol [unit]'."""
    path = Path(path)
    arrays = [np.asarray(v) for v in columns.values()]
    lengths = {a.shape[0] for a in arrays}
    if len(lengths) > 1:
        raise ValidationError(f"{path.name}: columns have different lengths {sorted(lengths)}")
    for header in columns:
        if "[" not in header or not header.endswith("]"):
            raise ValidationError(f"{path.name}: header {header!r} lacks a '[unit]' suffix")
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(columns))
        for row in zip(*arrays):
            writer.writerow([_cell(v) for v in row])
    return path


def read_csv(path) -> dict:
    """Read a table written by :func:`write_csv` back into float arrays (text columns kept)."""
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = list(reader)
    out = {}
    for j, name in enumerate(header):
        col = [r[j] for r in rows]
        try:
            out[name] = np.array([float(c) for c in col])
        except ValueError:
            out[name] = np.array(col)
    return out


def jsonable(obj):
    """Convert numpy scalars and arrays, tuples and dataclass-like dicts to JSON types."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if obj is None or isinstance(obj, (str, int)):
        return obj
    return str(obj)


def dumps_manifest(manifest: dict) -> str:
    return json.dumps(jsonable(manifest), indent=2, sort_keys=True) + "\n"


def write_manifest(path, manifest: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_manifest(manifest))
    return path


def read_manifest(path) -> dict:
    return json.loads(Path(path).read_text())


def versions() -> dict:
    try:
        package = metadata.version("artifact")
    except metadata.PackageNotFoundError:
        package = "unknown"
    return {
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "package": package,
        "platform": platform.platform(),
    }
