"""Sorted-edge filtrations of symmetric matrices, indexed by edge density."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonFiniteEntryError
from .matrices import SymmetricMatrix, pair_indices

DESCENDING = "descending"
ASCENDING = "ascending"
_ALIASES = {
    "descending": DESCENDING,
    "desc": DESCENDING,
    "ascending": ASCENDING,
    "asc": ASCENDING,
}


def normalize_direction(direction: str) -> str:
    try:
        return _ALIASES[direction.lower()]
    except KeyError:
        raise ValueError(f"unknown direction {direction!r} (use descending/ascending)")


@dataclass(frozen=True)
class EdgeSet:
    """A plain graph: vertex count plus an (m, 2) array of edges."""

    n_vertices: int
    edges: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        e.setflags(write=False)
        object.__setattr__(self, "edges", e)

    @property
    def n_edges(self) -> int:
        return self.edges.shape[0]


@dataclass(frozen=True)
class OrderComplex:
    """All off-diagonal pairs of a matrix, sorted by value.

    Rank s runs from 1 to k = C(N, 2); edge s sits at density s / k. Ties in
    value are broken lexicographically on (i, j) so rebuilds are identical.
    """

    n_vertices: int
    edge_i: np.ndarray  # int32[k], sorted by (direction, tie-break)
    edge_j: np.ndarray
    values: np.ndarray  # float64[k], monotone in the declared direction
    direction: str

    def __post_init__(self):
        for name in ("edge_i", "edge_j", "values"):
            arr = getattr(self, name)
            arr.setflags(write=False)

    @property
    def n_edges(self) -> int:
        return self.values.size

    @property
    def densities(self) -> np.ndarray:
        """density(s) = s / k for s = 1..k."""
        k = self.n_edges
        return np.arange(1, k + 1, dtype=np.float64) / k if k else np.empty(0)

    def step_at_density(self, rho: float) -> int:
        """Number of edges present at density rho: floor(rho * k)."""
        if not 0.0 <= rho <= 1.0:
            raise ValueError(f"density must lie in [0, 1], got {rho}")
        k = self.n_edges
        # guard against p/k * k landing a hair below p
        return min(k, int(np.floor(rho * k + 1e-9)))

    def rank_matrix(self) -> np.ndarray:
        """Dense N x N array of edge ranks (1..k); diagonal is 0."""
        n = self.n_vertices
        out = np.zeros((n, n), dtype=np.int64)
        ranks = np.arange(1, self.n_edges + 1)
        out[self.edge_i, self.edge_j] = ranks
        out[self.edge_j, self.edge_i] = ranks
        return out


def build_order_complex(matrix: SymmetricMatrix, direction: str = DESCENDING) -> OrderComplex:
    """Sort all off-diagonal pairs by value in the given direction.

    Any strictly increasing transform of the matrix yields the same edge
    order, which is what makes the downstream curves monotone-invariant.
    """
    direction = normalize_direction(direction)
    vals = matrix.entries
    bad = np.nonzero(~np.isfinite(vals))[0]
    iu, ju = pair_indices(matrix.n)
    if bad.size:
        b = int(bad[0])
        raise NonFiniteEntryError(int(iu[b]), int(ju[b]))
    key = -vals if direction == DESCENDING else vals
    order = np.lexsort((ju, iu, key))
    return OrderComplex(
        n_vertices=matrix.n,
        edge_i=iu[order].astype(np.int32),
        edge_j=ju[order].astype(np.int32),
        values=vals[order].copy(),
        direction=direction,
    )


def graph_at_density(oc: OrderComplex, rho: float) -> EdgeSet:
    """The first floor(rho * C(N,2)) edges of the filtration."""
    s = oc.step_at_density(rho)
    return EdgeSet(
        n_vertices=oc.n_vertices,
        edges=np.column_stack([oc.edge_i[:s], oc.edge_j[:s]]),
    )
