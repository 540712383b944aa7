"""Nearest-neighbor search over shadow manifolds.

Two interchangeable routes answer the same query, "the k nearest library
members of a manifold point, excluding the point itself":

* build_table + knn_in_library: precompute every point's full neighbor list
  sorted by distance once, then serve any library by scanning the sorted row
  and keeping members. Trades O(M^2) memory for fast repeated queries.
* naive_knn: compute distances to the current library on the fly and sort.

Both use Euclidean distance and break ties by ascending point index, so
their outputs are identical bit for bit; tests rely on that.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .errors import InsufficientNeighbors, ManifoldTooSmall
from .series import EmbeddingParams, ShadowManifold

__all__ = ["NeighborTable", "LibraryMask", "build_table", "knn_in_library", "naive_knn"]

_BUILD_BLOCK_ROWS = 512


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class LibraryMask:
    """Boolean membership of manifold points in one library subsample."""

    member_flags: np.ndarray

    def __post_init__(self):
        flags = np.asarray(self.member_flags, dtype=bool)
        object.__setattr__(self, "member_flags", _frozen(flags.copy()))

    @classmethod
    def from_indices(cls, indices, m: int) -> "LibraryMask":
        idx = np.asarray(indices, dtype=np.intp)
        if idx.size and (idx.min() < 0 or idx.max() >= m):
            bad = int(idx.min()) if idx.min() < 0 else int(idx.max())
            raise ValueError(
                f"library index {bad} outside the manifold range [0, {m})"
            )
        flags = np.zeros(m, dtype=bool)
        flags[idx] = True
        return cls(flags)

    @property
    def size(self) -> int:
        return int(self.member_flags.sum())

    def indices(self) -> np.ndarray:
        """Member indices in ascending order."""
        return np.flatnonzero(self.member_flags)


@dataclass(frozen=True, eq=False)
class NeighborTable:
    """Per-point neighbor lists over a whole manifold, sorted by distance.

    Attributes
    ----------
    source : str
        Name of the embedded series the manifold came from.
    params : EmbeddingParams
        The (E, tau) of the source manifold.
    sorted_neighbors : ndarray, shape (M, M-1), int32
        Row i lists every other point index ordered by ascending Euclidean
        distance from point i; ties ordered by ascending index.
    sorted_distances : ndarray, shape (M, M-1), float64
        Matching distances, non-decreasing along each row.
    """

    source: str
    params: EmbeddingParams
    sorted_neighbors: np.ndarray
    sorted_distances: np.ndarray

    @property
    def m(self) -> int:
        return self.sorted_neighbors.shape[0]

    @property
    def entry_count(self) -> int:
        """Stored entries, M * (M - 1); the table's memory footprint."""
        rows, cols = self.sorted_neighbors.shape
        return rows * cols


def build_table(manifold: ShadowManifold) -> NeighborTable:
    """Precompute the full sorted-neighbor table of a manifold.

    Parameters
    ----------
    manifold : ShadowManifold

    Returns
    -------
    NeighborTable
        Rows cover all M points; each row is the other M-1 indices sorted by
        ascending distance, ties by ascending index. Deterministic: building
        twice yields identical arrays.

    Raises
    ------
    ManifoldTooSmall
        If the manifold has fewer than two points.
    """
    points = manifold.points
    m = len(points)
    if m < 2:
        raise ManifoldTooSmall(f"need at least 2 manifold points, got {m}")
    neighbors = np.empty((m, m - 1), dtype=np.int32)
    distances = np.empty((m, m - 1), dtype=np.float64)
    row_ids = np.arange(m)
    for start in range(0, m, _BUILD_BLOCK_ROWS):
        stop = min(start + _BUILD_BLOCK_ROWS, m)
        block = cdist(points[start:stop], points)
        # stable argsort realizes the (distance, index) tie rule
        order = np.argsort(block, axis=1, kind="stable")
        keep = order != row_ids[start:stop, None]
        rows = stop - start
        neighbors[start:stop] = order[keep].reshape(rows, m - 1)
        distances[start:stop] = np.take_along_axis(block, order, axis=1)[keep].reshape(
            rows, m - 1
        )
    return NeighborTable(
        source=manifold.source,
        params=manifold.params,
        sorted_neighbors=_frozen(neighbors),
        sorted_distances=_frozen(distances),
    )


def knn_in_library(
    table: NeighborTable, query: int, mask: LibraryMask, k: int
) -> list[tuple[int, float]]:
    """k nearest library members of one point, served from the table.

    Parameters
    ----------
    table : NeighborTable
    query : int
        Point index in [0, M).
    mask : LibraryMask
        Current library membership over the same manifold.
    k : int
        Neighbor count, >= 1.

    Returns
    -------
    list of (index, distance)
        The first k member entries of the query's sorted row, ascending by
        distance; the query itself is never returned.

    Raises
    ------
    InsufficientNeighbors
        If the library holds fewer than k members besides the query.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    row = table.sorted_neighbors[query]
    hits = np.flatnonzero(mask.member_flags[row])
    if len(hits) < k:
        raise InsufficientNeighbors(
            f"library has {len(hits)} members besides point {query}, need {k}"
        )
    cols = hits[:k]
    dists = table.sorted_distances[query, cols]
    return [(int(row[c]), float(d)) for c, d in zip(cols, dists)]


def naive_knn(
    manifold: ShadowManifold, query: int, mask: LibraryMask, k: int
) -> list[tuple[int, float]]:
    """k nearest library members of one point, distances computed on the fly.

    Same contract and identical output as knn_in_library; this is the
    table-free reference path.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    members = mask.indices()
    members = members[members != query]
    if len(members) < k:
        raise InsufficientNeighbors(
            f"library has {len(members)} members besides point {query}, need {k}"
        )
    d = cdist(manifold.points[query : query + 1], manifold.points[members])[0]
    order = np.argsort(d, kind="stable")[:k]
    return [(int(members[c]), float(d[c])) for c in order]


def batch_naive_knn(
    points: np.ndarray, members: np.ndarray, k: int
) -> tuple[np.ndarray, np.ndarray]:
    """naive_knn for every manifold point at once.

    Parameters
    ----------
    points : ndarray, shape (M, E)
    members : ndarray
        Sorted library member indices.
    k : int

    Returns
    -------
    (neighbor_indices, neighbor_distances)
        Arrays of shape (M, k); row i solves the query for point i with
        leave-one-out self-exclusion.

    Raises
    ------
    InsufficientNeighbors
        If any row has fewer than k candidates.
    """
    m = len(points)
    if len(members) - 1 < k:
        raise InsufficientNeighbors(
            f"library of {len(members)} cannot serve k={k} with self-exclusion"
        )
    d = cdist(points, points[members])
    # self-exclusion: a row whose own index is a member ignores that column
    pos = np.searchsorted(members, np.arange(m))
    pos_c = np.minimum(pos, len(members) - 1)
    own = members[pos_c] == np.arange(m)
    d[np.flatnonzero(own), pos_c[own]] = np.inf
    order = np.argsort(d, axis=1, kind="stable")[:, :k]
    neighbor_distances = np.take_along_axis(d, order, axis=1)
    neighbor_indices = members[order]
    return neighbor_indices, neighbor_distances


def batch_table_knn(
    table: NeighborTable, mask: LibraryMask, k: int
) -> tuple[np.ndarray, np.ndarray]:
    """knn_in_library for every manifold point at once.

    Scans each sorted row only as far as needed: an initial window sized from
    the library density covers almost every row, and rare stragglers rescan
    with a wider window. Output is identical to batch_naive_knn.
    """
    m = table.m
    flags = mask.member_flags
    total = int(flags.sum())
    if total - 1 < k:
        raise InsufficientNeighbors(
            f"library of {total} cannot serve k={k} with self-exclusion"
        )
    rows_i = table.sorted_neighbors
    rows_d = table.sorted_distances
    cols = np.empty((m, k), dtype=np.intp)
    density = total / max(m - 1, 1)
    width = min(m - 1, max(32, int(np.ceil(3.0 * k / density))))
    pending = None  # None means all rows
    while True:
        sub = rows_i[:, :width] if pending is None else rows_i[pending, :width]
        member = flags[sub]
        cum = np.cumsum(member, axis=1)
        done = cum[:, -1] >= k
        first_k = member & (cum <= k)
        done_rows = np.flatnonzero(done) if pending is None else pending[done]
        cols[done_rows] = np.nonzero(first_k[done])[1].reshape(len(done_rows), k)
        pending = np.flatnonzero(~done) if pending is None else pending[~done]
        if len(pending) == 0:
            break
        width = min(m - 1, width * 4)
    neighbor_indices = np.take_along_axis(rows_i, cols, axis=1).astype(np.intp)
    neighbor_distances = np.take_along_axis(rows_d, cols, axis=1)
    return neighbor_indices, neighbor_distances
