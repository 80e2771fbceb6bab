"""Readers and writers for the package's file formats.

Matrix CSV: N x N decimals, optional header row / label column; the reader
checks symmetry to 1e-9 and averages the two triangles. Series CSV: one
column per series, one row per time point, optional header. Curve and
point-cloud CSVs carry their parameters as leading '# key=value' lines.
Signatures stream as JSON lines.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .errors import ParseError
from .filtration import OrderComplex
from .homology import BettiCurve
from .matrices import SymmetricMatrix, TimeSeriesSet
from .samplers import PointCloud

MATRIX_SYMMETRY_TOL = 1e-9


def _is_number(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def _read_rows(path) -> list[list[str]]:
    with open(path, newline="") as fh:
        rows = []
        for row in csv.reader(fh):
            while row and not row[-1].strip():
                row.pop()
            if row:
                rows.append(row)
    if not rows:
        raise ParseError("empty file", path=str(path))
    return rows


def read_matrix_csv(path, symmetry_tol: float = MATRIX_SYMMETRY_TOL) -> SymmetricMatrix:
    rows = _read_rows(path)
    header = None
    if not all(_is_number(c) for c in rows[0] if c.strip()):
        header = [c.strip() for c in rows[0]]
        rows = rows[1:]
        if not rows:
            raise ParseError("no data rows", path=str(path))
    labels = None
    if not _is_number(rows[0][0]):
        labels = [r[0].strip() for r in rows]
        rows = [r[1:] for r in rows]
    elif header is not None:
        labels = header[1:] if len(header) == len(rows[0]) + 1 else header
    n = len(rows)
    try:
        a = np.array([[float(c) for c in r] for r in rows], dtype=np.float64)
    except ValueError as exc:
        raise ParseError(f"non-numeric matrix cell: {exc}", path=str(path))
    if a.shape != (n, n):
        raise ParseError(f"expected a square matrix, got shape {a.shape}", path=str(path))
    finite = np.isfinite(a)
    asym = np.abs(np.where(finite & finite.T, a - a.T, 0.0)).max() if n else 0.0
    if asym > symmetry_tol:
        raise ParseError(
            f"matrix is asymmetric beyond tolerance ({asym:.3e} > {symmetry_tol:.1e})",
            path=str(path),
        )
    return SymmetricMatrix.from_dense(a, labels=labels, diagonal_from_input=True)


def write_matrix_csv(path, matrix: SymmetricMatrix, diagonal: float = 0.0) -> None:
    dense = matrix.to_dense(diagonal=diagonal)
    if matrix.diagonal is not None:
        np.fill_diagonal(dense, matrix.diagonal)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if matrix.labels is not None:
            writer.writerow(("",) + matrix.labels)
        for t in range(matrix.n):
            row = [f"{v!r}" for v in dense[t]]
            if matrix.labels is not None:
                row = [matrix.labels[t]] + row
            writer.writerow(row)


def read_series_csv(path) -> TimeSeriesSet:
    rows = _read_rows(path)
    labels = None
    if not all(_is_number(c) for c in rows[0] if c.strip()):
        labels = [c.strip() for c in rows[0]]
        rows = rows[1:]
    if not rows:
        raise ParseError("no data rows", path=str(path))
    width = len(rows[0])
    try:
        data = np.array([[float(c) for c in r] for r in rows], dtype=np.float64)
    except ValueError as exc:
        raise ParseError(f"non-numeric series cell: {exc}", path=str(path))
    if data.ndim != 2 or data.shape[1] != width:
        raise ParseError("ragged series rows", path=str(path))
    return TimeSeriesSet(values=data.T.copy(), labels=labels)


def write_series_csv(path, series: TimeSeriesSet) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if series.labels is not None:
            writer.writerow(series.labels)
        for t in range(series.length):
            writer.writerow([f"{v!r}" for v in series.values[:, t]])


def _write_metadata(fh, metadata: dict) -> None:
    for key, value in metadata.items():
        fh.write(f"# {key}={value}\n")


def write_filtration_csv(path, oc: OrderComplex) -> None:
    """Debug dump: one row per edge in filtration order."""
    with open(path, "w", newline="") as fh:
        _write_metadata(fh, {"direction": oc.direction, "n_vertices": oc.n_vertices})
        fh.write("rank,i,j,value,density\n")
        dens = oc.densities
        for s in range(oc.n_edges):
            fh.write(
                f"{s + 1},{oc.edge_i[s]},{oc.edge_j[s]},{oc.values[s]!r},{dens[s]!r}\n"
            )


def write_curve_csv(path, curve: BettiCurve, metadata: dict | None = None) -> None:
    with open(path, "w", newline="") as fh:
        _write_metadata(fh, metadata or {})
        cols = ",".join(f"beta_{p}" for p in range(curve.max_dim + 1))
        fh.write(f"density,{cols}\n")
        for g in range(curve.grid.size):
            vals = ",".join(str(int(v)) for v in curve.values[:, g])
            fh.write(f"{curve.grid[g]!r},{vals}\n")


def read_curve_csv(path) -> tuple[dict, np.ndarray, np.ndarray]:
    """(metadata, grid, values) back from write_curve_csv output."""
    metadata: dict = {}
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                metadata[key.strip()] = value.strip()
            elif line.startswith("density"):
                continue
            else:
                rows.append([float(c) for c in line.split(",")])
    data = np.array(rows)
    return metadata, data[:, 0], data[:, 1:].T.astype(np.int64)


def write_pointcloud_csv(path, cloud: PointCloud, seed=None) -> None:
    metadata = {"geometry": cloud.geometry, "dim": cloud.ambient_dim}
    if cloud.radius is not None:
        metadata["radius"] = cloud.radius
    if seed is not None:
        metadata["seed"] = seed
    with open(path, "w", newline="") as fh:
        _write_metadata(fh, metadata)
        for row in cloud.coordinates:
            fh.write(",".join(f"{v!r}" for v in row) + "\n")


def append_signature_records(path, records: list[dict]) -> None:
    with open(path, "a") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")


def read_signature_records(path) -> list[dict]:
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(json.loads(line))
    return out


def ensure_dir(path) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p
