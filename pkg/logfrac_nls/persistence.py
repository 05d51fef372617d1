"""Result files: CSV series and tables, JSON reports, binary state snapshots."""
import csv
import hashlib
import json
import os
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence, Tuple

import numpy as np

from .grid import ComplexField, make_grid
from .observables import ObservableSeries
from .sim_types import ExperimentReport


HEADER_INTS = np.dtype("<i8")
HEADER_FLOATS = np.dtype("<f8")
VALUES = np.dtype("<c16")  # interleaved (re, im) little-endian float64


def _fmt(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def write_table_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path = Path(path)
    os.makedirs(path.parent, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(list(header))
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def write_series_csv(path: Path, series: ObservableSeries) -> Path:
    """One row per ObservableRecord, columns in the record's fixed order."""
    return write_table_csv(path, series.header, series.rows())


def read_table_csv(path: Path) -> Tuple[List[str], List[List[str]]]:
    with open(path, "r", newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    return rows[0], rows[1:]


def _jsonable(value: Any):
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"Not JSON serializable: {type(value).__name__}")


def report_json(report: ExperimentReport) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True, default=_jsonable, allow_nan=True)


def write_report_json(path: Path, report: ExperimentReport) -> Path:
    path = Path(path)
    os.makedirs(path.parent, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(report_json(report))
        f.write("\n")
    return path


def load_report_json(path: Path) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def write_snapshot(path: Path, u: ComplexField, s: float, lam: float, eps: float, t: float) -> Path:
    """
    Flat binary state: int64 (d, n), float64 (L, s, lam, eps, t), then n^d
    complex128 values in row-major order. Everything little-endian.
    """
    path = Path(path)
    os.makedirs(path.parent, exist_ok=True)
    grid = u.grid
    with open(path, "wb") as f:
        f.write(np.array([grid.d, grid.n], dtype=HEADER_INTS).tobytes())
        f.write(np.array([grid.L, s, lam, eps, t], dtype=HEADER_FLOATS).tobytes())
        f.write(np.ascontiguousarray(u.values, dtype=VALUES).tobytes(order="C"))
    return path


def read_snapshot(path: Path) -> Tuple[ComplexField, Dict[str, float]]:
    raw = Path(path).read_bytes()
    d, n = np.frombuffer(raw, dtype=HEADER_INTS, count=2)
    offset = 2 * HEADER_INTS.itemsize
    L, s, lam, eps, t = np.frombuffer(raw, dtype=HEADER_FLOATS, count=5, offset=offset)
    offset += 5 * HEADER_FLOATS.itemsize
    grid = make_grid(int(d), int(n), float(L))
    expected = offset + grid.size * VALUES.itemsize
    if len(raw) != expected:
        raise ValueError(f"Snapshot {path} has {len(raw)} bytes, expected {expected}")
    values = np.frombuffer(raw, dtype=VALUES, count=grid.size, offset=offset).reshape(grid.shape)
    meta = {"s": float(s), "lam": float(lam), "eps": float(eps), "t": float(t)}
    return ComplexField(grid, values), meta


def sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def digest_outputs(root: Path, pattern: str = "*.csv") -> Dict[str, str]:
    """sha256 of every matching file under root, keyed by relative path."""
    root = Path(root)
    return {
        str(p.relative_to(root)).replace(os.sep, "/"): sha256_file(p)
        for p in sorted(root.rglob(pattern))
    }
