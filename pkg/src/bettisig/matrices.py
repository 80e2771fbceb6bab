"""Symmetric matrices, time-series sets, and series-to-matrix transforms."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import pdist

from .errors import ConstantSeriesError, LengthMismatchError, NonPositivePriceError


def n_pairs(n: int) -> int:
    """Number of unordered vertex pairs, C(n, 2)."""
    return n * (n - 1) // 2


def pair_index(i: int, j: int, n: int) -> int:
    """Condensed (row-major upper-triangle) index of the pair {i, j}, i < j."""
    if i > j:
        i, j = j, i
    if i == j:
        raise ValueError("diagonal pairs have no condensed index")
    return n * i - i * (i + 1) // 2 + (j - i - 1)


def pair_indices(n: int) -> tuple[np.ndarray, np.ndarray]:
    """(i, j) arrays of all unordered pairs in condensed order."""
    return np.triu_indices(n, k=1)


@dataclass(frozen=True)
class SymmetricMatrix:
    """N x N real symmetric matrix with the diagonal excluded.

    Only the upper triangle is stored (condensed, row-major), so symmetry
    holds by construction. A diagonal read from an input file is kept for
    validation reporting but plays no role in any computation.
    """

    n: int
    entries: np.ndarray  # float64, length C(n, 2), condensed order
    labels: tuple[str, ...] | None = None
    diagonal: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("matrix needs at least one vertex")
        ent = np.asarray(self.entries, dtype=np.float64)
        if ent.shape != (n_pairs(self.n),):
            raise ValueError(
                f"expected {n_pairs(self.n)} condensed entries for n={self.n}, "
                f"got shape {ent.shape}"
            )
        ent.setflags(write=False)
        object.__setattr__(self, "entries", ent)
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != self.n:
                raise ValueError("label count must equal n")
            object.__setattr__(self, "labels", labels)

    @property
    def n_offdiagonal(self) -> int:
        return self.entries.size

    def entry(self, i: int, j: int) -> float:
        if i == j:
            raise ValueError("diagonal entries are not stored")
        return float(self.entries[pair_index(i, j, self.n)])

    @classmethod
    def from_dense(cls, dense, labels=None, diagonal_from_input: bool = False) -> "SymmetricMatrix":
        """Build from a full square array, averaging the two triangles."""
        a = np.asarray(dense, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        n = a.shape[0]
        iu, ju = pair_indices(n)
        entries = 0.5 * (a[iu, ju] + a[ju, iu])
        diag = np.array(np.diagonal(a)) if diagonal_from_input else None
        return cls(n=n, entries=entries, labels=labels, diagonal=diag)

    @classmethod
    def from_condensed(cls, n: int, entries, labels=None) -> "SymmetricMatrix":
        return cls(n=n, entries=np.asarray(entries, dtype=np.float64), labels=labels)

    def to_dense(self, diagonal: float = 0.0) -> np.ndarray:
        out = np.full((self.n, self.n), diagonal, dtype=np.float64)
        iu, ju = pair_indices(self.n)
        out[iu, ju] = self.entries
        out[ju, iu] = self.entries
        return out


@dataclass(frozen=True)
class TimeSeriesSet:
    """A stack of equally long real-valued series, one per row."""

    values: np.ndarray  # shape (n_series, length)
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2:
            raise ValueError(f"expected a 2-D array, got shape {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != v.shape[0]:
                raise ValueError("label count must equal n_series")
            object.__setattr__(self, "labels", labels)

    @property
    def n_series(self) -> int:
        return self.values.shape[0]

    @property
    def length(self) -> int:
        return self.values.shape[1]

    @classmethod
    def from_rows(cls, rows, labels=None) -> "TimeSeriesSet":
        rows = [np.asarray(r, dtype=np.float64) for r in rows]
        lengths = {r.shape for r in rows}
        if len(lengths) > 1 or any(r.ndim != 1 for r in rows):
            raise LengthMismatchError(f"ragged series lengths: {sorted(len(r) for r in rows)}")
        return cls(values=np.vstack(rows), labels=labels)

    def truncated(self, length: int) -> "TimeSeriesSet":
        if length > self.length:
            raise ValueError(f"cannot truncate to {length} > {self.length}")
        return TimeSeriesSet(values=self.values[:, :length].copy(), labels=self.labels)


def _centered_and_norms(values: np.ndarray):
    centered = values - values.mean(axis=1, keepdims=True)
    norms = np.linalg.norm(centered, axis=1)
    zero = np.nonzero(norms == 0.0)[0]
    if zero.size:
        raise ConstantSeriesError(int(zero[0]))
    return centered, norms


def pearson_correlation(series: TimeSeriesSet) -> SymmetricMatrix:
    """Pairwise Pearson coefficients of all series.

    Normalization by T versus T-1 cancels in the ratio, so the population
    formula is used throughout.
    """
    if series.length < 2:
        raise ValueError("Pearson correlation needs at least 2 time points")
    centered, norms = _centered_and_norms(series.values)
    gram = centered @ centered.T
    iu, ju = pair_indices(series.n_series)
    entries = gram[iu, ju] / (norms[iu] * norms[ju])
    return SymmetricMatrix(n=series.n_series, entries=entries, labels=series.labels)


def log_returns(prices: TimeSeriesSet) -> TimeSeriesSet:
    """First differences of the log-transformed prices; output is one shorter."""
    v = prices.values
    bad = np.argwhere(v <= 0.0)
    if bad.size:
        s, t = bad[0]
        raise NonPositivePriceError(int(s), int(t))
    if prices.length < 2:
        raise ValueError("need at least 2 prices per series")
    return TimeSeriesSet(values=np.diff(np.log(v), axis=1), labels=prices.labels)


def normalize_series(series: TimeSeriesSet) -> TimeSeriesSet:
    """Remove each series' mean and rescale it to unit variance."""
    centered, norms = _centered_and_norms(series.values)
    scale = norms / np.sqrt(series.length)  # population standard deviation
    return TimeSeriesSet(values=centered / scale[:, None], labels=series.labels)


def distance_matrix_from_series(
    series: TimeSeriesSet,
    metric: str = "euclidean",
    normalize: bool = False,
) -> SymmetricMatrix:
    """Pairwise series distances: plain Euclidean or 1 - Pearson."""
    if metric not in ("euclidean", "correlation_distance"):
        raise ValueError(f"unknown metric {metric!r}")
    work = normalize_series(series) if normalize else series
    if metric == "euclidean":
        entries = pdist(work.values)
        return SymmetricMatrix(n=series.n_series, entries=entries, labels=series.labels)
    corr = pearson_correlation(work)
    return SymmetricMatrix(n=corr.n, entries=1.0 - corr.entries, labels=series.labels)


@dataclass(frozen=True)
class ValidationReport:
    """Report-only diagnostics for a symmetric matrix.

    The filtration assumes generic (all-distinct, non-zero) off-diagonal
    values; ties are tolerated downstream but worth surfacing.
    """

    n: int
    n_offdiagonal: int
    finite: bool
    n_nonfinite: int
    n_tied: int  # entries sharing their value with at least one other
    n_distinct: int
    n_zero: int
    diagonal_nonzero: int | None = None
    diagonal_nonfinite: int | None = None

    def summary(self) -> str:
        lines = [
            f"vertices: {self.n}",
            f"off-diagonal entries: {self.n_offdiagonal}",
            f"finite: {'yes' if self.finite else 'NO'} ({self.n_nonfinite} non-finite)",
            f"tied entries: {self.n_tied} ({self.n_distinct} distinct values)",
            f"zero entries: {self.n_zero}",
        ]
        if self.diagonal_nonzero is not None:
            lines.append(f"non-zero diagonal entries: {self.diagonal_nonzero}")
        if self.diagonal_nonfinite is not None:
            lines.append(f"non-finite diagonal entries: {self.diagonal_nonfinite}")
        return "\n".join(lines)


def validate(matrix: SymmetricMatrix) -> ValidationReport:
    ent = matrix.entries
    finite_mask = np.isfinite(ent)
    n_nonfinite = int((~finite_mask).sum())
    finite_vals = ent[finite_mask]
    _, counts = np.unique(finite_vals, return_counts=True)
    n_tied = int(counts[counts > 1].sum())
    diag_nz = diag_nf = None
    if matrix.diagonal is not None:
        diag_nf = int((~np.isfinite(matrix.diagonal)).sum())
        diag_nz = int((matrix.diagonal[np.isfinite(matrix.diagonal)] != 0.0).sum())
    return ValidationReport(
        n=matrix.n,
        n_offdiagonal=ent.size,
        finite=n_nonfinite == 0,
        n_nonfinite=n_nonfinite,
        n_tied=n_tied,
        n_distinct=int(counts.size),
        n_zero=int((finite_vals == 0.0).sum()),
        diagonal_nonzero=diag_nz,
        diagonal_nonfinite=diag_nf,
    )
