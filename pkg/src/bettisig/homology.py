"""Flag-complex homology along an edge filtration.

Cliques of the filtered graph are the simplices; homology is over the
two-element field. Dimension 0 is tracked with an incremental union-find;
dimensions >= 1 come from a single persistence-style column reduction of
the boundary maps (processed top dimension first, so pivots of one pass
clear known-zero columns of the next). Betti values at any density then
count the barcode intervals containing that density.

`betti_brute_force` is the deliberately naive cross-check: full clique
complex, dense boundary matrices, Gaussian elimination ranks. It shares no
code with the incremental path.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import BudgetExceededError, TooLargeError
from .filtration import EdgeSet, OrderComplex

DEFAULT_BUDGET = 200_000_000
BRUTE_FORCE_LIMIT = 16


class UnionFind:
    """Array union-find with path halving; tracks the component count."""

    __slots__ = ("parent", "n_components")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.n_components = n

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        """Merge the components of a and b; True if they were distinct."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        self.n_components -= 1
        return True


def connected_components_curve(oc: OrderComplex) -> np.ndarray:
    """beta_0 after every edge insertion; index s = components of G_s."""
    out = np.empty(oc.n_edges + 1, dtype=np.int64)
    out[0] = oc.n_vertices
    uf = UnionFind(oc.n_vertices)
    for s, (a, b) in enumerate(zip(oc.edge_i.tolist(), oc.edge_j.tolist())):
        uf.union(a, b)
        out[s + 1] = uf.n_components
    return out


class DimSimplices(NamedTuple):
    verts: np.ndarray  # (count, dim+1) int64, each row strictly increasing
    ranks: np.ndarray  # (count,) int64 filtration rank = latest edge rank


@dataclass(frozen=True)
class FlagFiltration:
    """Cliques of the final graph tagged with their appearance rank.

    Dimension p holds the (p+1)-cliques sorted by (rank, vertex tuple); a
    clique's rank is the largest rank among its edges, so faces never
    appear after cofaces. Enumeration reaches dimension max_dim + 1, one
    above the homology actually reported, as required by the reduction.
    """

    order_complex: OrderComplex
    max_dim: int
    simplices: tuple[DimSimplices, ...]

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(len(d.ranks) for d in self.simplices)


def _binom(n: int, q: int) -> int:
    if q < 0 or q > n:
        return 0
    out = 1
    for t in range(q):
        out = out * (n - t) // (t + 1)
    return out


def enumerate_cliques(
    oc: OrderComplex, max_clique_size: int, budget: int = DEFAULT_BUDGET
) -> FlagFiltration:
    """Every clique of the final graph up to the given size, rank-tagged.

    The final graph of a dense matrix is complete, so size-q cliques are
    exactly the q-subsets of vertices and can be enumerated directly.
    """
    if max_clique_size < 1:
        raise ValueError("max_clique_size must be >= 1")
    n = oc.n_vertices
    total = sum(_binom(n, q) for q in range(1, max_clique_size + 1))
    if total > budget:
        raise BudgetExceededError(budget, total)

    rank_mat = oc.rank_matrix()
    dims: list[DimSimplices] = [
        DimSimplices(
            verts=np.arange(n, dtype=np.int64).reshape(-1, 1),
            ranks=np.zeros(n, dtype=np.int64),
        )
    ]
    if max_clique_size >= 2 and oc.n_edges:
        dims.append(
            DimSimplices(
                verts=np.column_stack([oc.edge_i, oc.edge_j]).astype(np.int64),
                ranks=np.arange(1, oc.n_edges + 1, dtype=np.int64),
            )
        )
    for q in range(3, max_clique_size + 1):
        count = _binom(n, q)
        if count == 0:
            break
        verts = np.fromiter(
            itertools.chain.from_iterable(itertools.combinations(range(n), q)),
            dtype=np.int64,
            count=count * q,
        ).reshape(count, q)
        ranks = np.zeros(count, dtype=np.int64)
        for a, b in itertools.combinations(range(q), 2):
            np.maximum(ranks, rank_mat[verts[:, a], verts[:, b]], out=ranks)
        order = np.lexsort(tuple(verts[:, t] for t in reversed(range(q))) + (ranks,))
        dims.append(DimSimplices(verts=verts[order], ranks=ranks[order]))
    return FlagFiltration(
        order_complex=oc, max_dim=max_clique_size - 2, simplices=tuple(dims)
    )


def _encode_rows(verts: np.ndarray, n: int) -> np.ndarray:
    """Injective int64 key per vertex tuple (base-n digits)."""
    key = np.zeros(verts.shape[0], dtype=np.int64)
    for t in range(verts.shape[1]):
        key = key * n + verts[:, t]
    return key


def _face_row_indices(col_verts: np.ndarray, row_verts: np.ndarray, n: int) -> np.ndarray:
    """For each column simplex, the row indices of its codimension-1 faces."""
    q = col_verts.shape[1]
    row_keys = _encode_rows(row_verts, n)
    order = np.argsort(row_keys)
    sorted_keys = row_keys[order]
    out = np.empty((col_verts.shape[0], q), dtype=np.int64)
    for drop in range(q):
        face = np.delete(col_verts, drop, axis=1)
        pos = np.searchsorted(sorted_keys, _encode_rows(face, n))
        out[:, drop] = order[pos]
    return out


def boundary_columns(filtration: FlagFiltration, p: int) -> list[list[int]]:
    """Columns of the p-th boundary map as sorted (p-1)-face row indices."""
    if p < 1 or p >= len(filtration.simplices):
        raise ValueError(f"no boundary map in dimension {p}")
    cols = filtration.simplices[p]
    rows = filtration.simplices[p - 1]
    idx = np.sort(
        _face_row_indices(cols.verts, rows.verts, filtration.order_complex.n_vertices),
        axis=1,
    )
    return idx.tolist()


@dataclass(frozen=True)
class BettiCurve:
    """Per-dimension Betti numbers sampled on a density grid."""

    grid: np.ndarray  # densities in [0, 1], sorted, endpoints included
    values: np.ndarray  # shape (max_dim + 1, len(grid)), non-negative ints
    max_dim: int

    def __post_init__(self):
        self.grid.setflags(write=False)
        self.values.setflags(write=False)

    def dimension(self, dim: int) -> np.ndarray:
        return self.values[dim]


def default_grid(n_vertices: int, n_edges: int) -> np.ndarray:
    """Per-edge-step densities up to 120 vertices, else 512 even samples."""
    if n_vertices <= 120:
        if n_edges == 0:
            return np.array([0.0, 1.0])
        return np.arange(n_edges + 1, dtype=np.float64) / n_edges
    return np.linspace(0.0, 1.0, 512)


def _reduce_dimension(
    col_ranks: list[int],
    col_faces: list[list[int]],
    cleared: dict[int, int],
    record_intervals: bool,
) -> tuple[dict[int, int], list[tuple[int, int]], int]:
    """One left-to-right reduction pass over the columns of a boundary map.

    Returns (deaths for the row dimension keyed by row index, intervals
    (birth, death) for the column dimension with death = -1 for essential
    classes, essential count). Columns listed in `cleared` are skipped:
    the previous pass proved they reduce to zero and already knows their
    death rank.
    """
    pivots: dict[int, int] = {}
    row_deaths: dict[int, int] = {}
    intervals: list[tuple[int, int]] = []
    for j, faces in enumerate(col_faces):
        rank_j = col_ranks[j]
        if j in cleared:
            if record_intervals:
                death = cleared[j]
                if death > rank_j:
                    intervals.append((rank_j, death))
            continue
        col = 0
        for f in faces:
            col |= 1 << f
        while col:
            low = col.bit_length() - 1
            piv = pivots.get(low)
            if piv is None:
                pivots[low] = col
                row_deaths[low] = rank_j
                break
            col ^= piv
        else:
            if record_intervals:
                intervals.append((rank_j, -1))
    return row_deaths, intervals, len(intervals)


def betti_curves(filtration: FlagFiltration, grid=None) -> BettiCurve:
    """Betti numbers beta_0..beta_max_dim of the clique complex at each
    grid density.

    Dimension 0 comes from the union-find sweep; higher dimensions from
    the barcode of the Z2 reduction: beta_i(rho) counts the dimension-i
    intervals whose rank span contains floor(rho * k).
    """
    oc = filtration.order_complex
    n, k = oc.n_vertices, oc.n_edges
    max_dim = filtration.max_dim
    if grid is None:
        grid = default_grid(n, k)
    grid = np.asarray(grid, dtype=np.float64)
    if grid.size == 0 or np.any(grid < 0.0) or np.any(grid > 1.0) or np.any(np.diff(grid) < 0):
        raise ValueError("grid must be a sorted array of densities in [0, 1]")
    steps = np.minimum(k, np.floor(grid * k + 1e-9).astype(np.int64))

    values = np.zeros((max_dim + 1, grid.size), dtype=np.int64)

    # dimension 0: union-find, also flags the cycle-closing (positive) edges
    beta0 = np.empty(k + 1, dtype=np.int64)
    beta0[0] = n
    positive_edge = np.zeros(k, dtype=bool)
    uf = UnionFind(n)
    for s, (a, b) in enumerate(zip(oc.edge_i.tolist(), oc.edge_j.tolist())):
        merged = uf.union(a, b)
        positive_edge[s] = not merged
        beta0[s + 1] = uf.n_components
    values[0] = beta0[steps]

    if max_dim >= 1:
        intervals_by_dim: dict[int, list[tuple[int, int]]] = {
            p: [] for p in range(1, max_dim + 1)
        }
        deaths_for_rows: dict[int, int] = {}
        for p in range(max_dim + 1, 1, -1):
            if p >= len(filtration.simplices):
                deaths_for_rows = {}
                continue
            cols = filtration.simplices[p]
            faces = _face_row_indices(
                cols.verts, filtration.simplices[p - 1].verts, n
            ).tolist()
            row_deaths, intervals, _ = _reduce_dimension(
                cols.ranks.tolist(), faces, deaths_for_rows, record_intervals=p <= max_dim
            )
            if p <= max_dim:
                intervals_by_dim[p] = intervals
            deaths_for_rows = row_deaths

        # dimension-1 births are the cycle-closing edges (row index = rank - 1)
        edge_deaths = deaths_for_rows
        d1 = intervals_by_dim[1]
        for s in np.nonzero(positive_edge)[0].tolist():
            birth = s + 1
            death = edge_deaths.get(s, -1)
            if death == -1 or death > birth:
                d1.append((birth, death))

        infinite = k + 1
        for p in range(1, max_dim + 1):
            pairs = intervals_by_dim[p]
            if not pairs:
                continue
            births = np.sort(np.array([b for b, _ in pairs], dtype=np.int64))
            deaths = np.sort(
                np.array([d if d != -1 else infinite for _, d in pairs], dtype=np.int64)
            )
            values[p] = np.searchsorted(births, steps, side="right") - np.searchsorted(
                deaths, steps, side="right"
            )

    return BettiCurve(grid=grid, values=values, max_dim=max_dim)


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------


def _all_cliques_bitmask(adj: list[int], n: int, max_size: int) -> list[list[tuple]]:
    """All cliques of an adjacency-bitmask graph grouped by dimension."""
    by_dim: list[list[tuple]] = [[] for _ in range(max_size)]

    def grow(clique: tuple, cand: int):
        d = len(clique) - 1
        by_dim[d].append(clique)
        if d + 1 >= max_size:
            return
        c = cand
        while c:
            v = (c & -c).bit_length() - 1
            c &= c - 1
            grow(clique + (v,), cand & adj[v] & ~((1 << (v + 1)) - 1))

    for v in range(n):
        grow((v,), adj[v] & ~((1 << (v + 1)) - 1))
    while by_dim and not by_dim[-1]:
        by_dim.pop()
    return by_dim


def _gf2_rank_packed(rows: np.ndarray, n_cols: int) -> int:
    """Rank over Z2 of a bit-packed matrix (one uint8-packed row per row)."""
    m = rows
    n_rows = m.shape[0]
    r = 0
    for c in range(n_cols):
        if r >= n_rows:
            break
        byte, mask = c >> 3, 0x80 >> (c & 7)
        nz = np.nonzero(m[r:, byte] & mask)[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            m[[r, p]] = m[[p, r]]
        elim = np.nonzero(m[r + 1 :, byte] & mask)[0]
        if elim.size:
            m[elim + r + 1] ^= m[r]
        r += 1
    return r


def _boundary_rank(rows: list[tuple], cols: list[tuple]) -> int:
    """Rank over Z2 of the boundary map sending each simplex in `cols`
    to the sum of its codimension-1 faces in `rows`."""
    if not rows or not cols:
        return 0
    row_index = {s: t for t, s in enumerate(rows)}
    n_rows, n_cols = len(rows), len(cols)
    packed = np.zeros((n_rows, (n_cols + 7) // 8), dtype=np.uint8)
    for j, simplex in enumerate(cols):
        byte, mask = j >> 3, 0x80 >> (j & 7)
        for f in itertools.combinations(simplex, len(simplex) - 1):
            packed[row_index[f], byte] |= mask
    return _gf2_rank_packed(packed, n_cols)


def brute_force_profile(edges: EdgeSet, max_size: int | None = None):
    """(simplex counts, Betti numbers) of the full clique complex.

    Exponential in the vertex count; guarded at BRUTE_FORCE_LIMIT vertices.
    When max_size is given, cliques are only enumerated up to that size and
    the Betti list stops at dimension max_size - 2.
    """
    n = edges.n_vertices
    if n > BRUTE_FORCE_LIMIT:
        raise TooLargeError(n, BRUTE_FORCE_LIMIT)
    if n == 0:
        return [], []
    adj = [0] * n
    for a, b in edges.edges.tolist():
        adj[a] |= 1 << b
        adj[b] |= 1 << a
    size = n if max_size is None else min(n, max_size)
    cliques = _all_cliques_bitmask(adj, n, size)
    counts = [len(c) for c in cliques]
    ranks = [0] * (len(cliques) + 1)  # ranks[p] = rank of boundary map C_p -> C_{p-1}
    for p in range(1, len(cliques)):
        ranks[p] = _boundary_rank(cliques[p - 1], cliques[p])
    bettis = [counts[p] - ranks[p] - ranks[p + 1] for p in range(len(cliques))]
    return counts, bettis


def betti_brute_force(edges: EdgeSet, max_dim: int | None = None) -> list[int]:
    """Betti numbers of the clique complex by dense Z2 Gaussian elimination.

    With max_dim given, returns exactly max_dim + 1 values (zero-padded);
    cliques are then only enumerated up to size max_dim + 2, since
    beta_p needs the boundary ranks in dimensions p and p + 1 only.
    """
    max_size = None if max_dim is None else max_dim + 2
    _, bettis = brute_force_profile(edges, max_size=max_size)
    if max_dim is None:
        return bettis
    out = bettis[: max_dim + 1]
    return out + [0] * (max_dim + 1 - len(out))
