"""Cross-map prediction by simplex projection and Pearson skill scoring."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch, TooFewPoints
from .neighbors import (
    LibraryMask,
    NeighborTable,
    batch_naive_knn,
    batch_table_knn,
    knn_in_library,
    naive_knn,
)
from .series import ShadowManifold, TimeSeries

__all__ = ["CrossMapResult", "simplex_weights", "cross_map", "pearson"]

VARIANCE_FLOOR = 1e-15


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class CrossMapResult:
    """Paired predictions and observations with their correlation skill.

    Attributes
    ----------
    predicted : ndarray
        Cross-map estimates, one per query time.
    observed : ndarray
        Matching true source values.
    query_times : ndarray
        Time t of each prediction.
    rho : float
        Pearson correlation of predicted against observed, in [-1, 1];
        0.0 when either side has (numerically) zero variance.
    degenerate : bool
        True when rho is the zero-variance sentinel rather than a
        measured correlation.
    """

    predicted: np.ndarray
    observed: np.ndarray
    query_times: np.ndarray
    rho: float
    degenerate: bool


def _weight_rows(distances: np.ndarray) -> np.ndarray:
    """Simplex weights for each row of an ascending (q, k) distance matrix."""
    d1 = distances[:, :1]
    safe = np.where(d1 > 0.0, d1, 1.0)
    u = np.where(d1 > 0.0, np.exp(-distances / safe), (distances == 0.0).astype(np.float64))
    return u / u.sum(axis=1, keepdims=True)


def simplex_weights(distances) -> np.ndarray:
    """Exponential simplex-projection weights for one neighbor set.

    Parameters
    ----------
    distances : sequence of float
        k non-negative distances in non-decreasing order.

    Returns
    -------
    ndarray, shape (k,)
        w_i = u_i / sum(u) with u_i = exp(-d_i / d_1). If d_1 = 0 the
        weights are uniform over the zero-distance entries and zero
        elsewhere, so exact matches predict exactly. Weights are positive
        (where defined), sum to 1 within 1e-12, and are non-increasing.
    """
    d = np.asarray(distances, dtype=np.float64)
    if d.ndim != 1 or len(d) < 1:
        raise ValueError(f"need a 1-D distance list with k >= 1, got shape {d.shape}")
    if (d < 0).any():
        raise ValueError("distances must be non-negative")
    if (np.diff(d) < 0).any():
        raise ValueError("distances must be non-decreasing")
    return _weight_rows(d[None, :])[0]


def pearson(a, b) -> tuple[float, bool]:
    """Pearson correlation with a degenerate-variance sentinel.

    Parameters
    ----------
    a, b : sequences of float
        Equal lengths >= 2.

    Returns
    -------
    (rho, degenerate)
        rho in [-1, 1]. When either input's variance falls below 1e-15
        the correlation is undefined; the sentinel (0.0, True) is returned
        instead, because a constant prediction carries no information.

    Raises
    ------
    LengthMismatch
        If lengths differ.
    TooFewPoints
        If fewer than two points.
    """
    av = np.asarray(a, dtype=np.float64)
    bv = np.asarray(b, dtype=np.float64)
    if av.shape != bv.shape:
        raise LengthMismatch(f"length {len(av)} vs {len(bv)}")
    if len(av) < 2:
        raise TooFewPoints(f"need at least 2 points, got {len(av)}")
    ad = av - av.mean()
    bd = bv - bv.mean()
    ssa = float(ad @ ad)
    ssb = float(bd @ bd)
    n = len(av)
    if ssa / n < VARIANCE_FLOOR or ssb / n < VARIANCE_FLOOR:
        return 0.0, True
    rho = float(ad @ bd) / float(np.sqrt(ssa * ssb))
    return float(np.clip(rho, -1.0, 1.0)), False


def cross_map(
    source: TimeSeries,
    manifold: ShadowManifold,
    table: NeighborTable | None,
    mask: LibraryMask,
    query_times=None,
) -> CrossMapResult:
    """Predict a source series from another series' shadow manifold.

    For each query time t, the k = E+1 nearest library neighbors of the
    manifold point at t are fetched (from the precomputed table when one is
    given, otherwise by direct distance computation; results are identical),
    and the prediction is the simplex-weighted average of the source values
    at the neighbors' times. Skill is the Pearson correlation of predictions
    against observations over all query times.

    Parameters
    ----------
    source : TimeSeries
        The series being predicted; must cover the manifold's time range.
    manifold : ShadowManifold
        Reconstruction of the other series.
    table : NeighborTable or None
        Precomputed neighbor table of `manifold`, or None to compute
        distances on the fly.
    mask : LibraryMask
        Library membership over the manifold's points.
    query_times : sequence of int, optional
        Prediction times; defaults to every valid manifold time. Each query
        leaves itself out of its own neighbor set.

    Returns
    -------
    CrossMapResult

    Raises
    ------
    InsufficientNeighbors
        If the library cannot supply k neighbors for a query.
    LengthMismatch
        If the source series does not cover the manifold times.
    TooFewPoints
        If fewer than two query times.
    """
    k = manifold.params.E + 1
    times = manifold.time_index
    if source.n <= int(times[-1]):
        raise LengthMismatch(
            f"source series of length {source.n} does not cover manifold times up to {int(times[-1])}"
        )
    if query_times is None:
        if table is not None:
            nidx, nd = batch_table_knn(table, mask, k)
        else:
            nidx, nd = batch_naive_knn(manifold.points, mask.indices(), k)
        q_times = times
    else:
        q_times = np.asarray(query_times, dtype=np.intp)
        t0 = int(times[0])
        if len(q_times) and (q_times.min() < t0 or q_times.max() > int(times[-1])):
            raise ValueError(
                f"query times must lie within [{t0}, {int(times[-1])}]"
            )
        rows = q_times - t0
        pairs = [
            knn_in_library(table, int(r), mask, k)
            if table is not None
            else naive_knn(manifold, int(r), mask, k)
            for r in rows
        ]
        nidx = np.array([[i for i, _ in p] for p in pairs], dtype=np.intp)
        nd = np.array([[d for _, d in p] for p in pairs], dtype=np.float64)
    if len(q_times) < 2:
        raise TooFewPoints(f"need at least 2 query times, got {len(q_times)}")
    weights = _weight_rows(nd)
    neighbor_values = source.values[times[nidx]]
    predicted = (weights * neighbor_values).sum(axis=1)
    observed = source.values[q_times]
    rho, degenerate = pearson(observed, predicted)
    return CrossMapResult(
        predicted=_frozen(predicted),
        observed=_frozen(observed.copy()),
        query_times=_frozen(np.asarray(q_times, dtype=np.intp).copy()),
        rho=rho,
        degenerate=degenerate,
    )
