"""Time-series containers, validation, synthetic ground truth, and delay embedding."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateOrbit, EmptyManifold, NonFiniteValue, TooShort

__all__ = [
    "TimeSeries",
    "EmbeddingParams",
    "ShadowManifold",
    "validate_series",
    "embed",
    "generate_coupled_logistic",
]

TRANSIENT_STEPS = 100


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """A named, uniformly sampled sequence of finite real observations.

    Attributes
    ----------
    name : str
        Label used in results and error messages.
    values : ndarray
        Observations in time order, read-only float64, length >= 2.
    """

    name: str
    values: np.ndarray

    @property
    def n(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class EmbeddingParams:
    """Delay-embedding parameters: dimension E and delay tau, both >= 1."""

    E: int
    tau: int

    def __post_init__(self):
        if self.E < 1:
            raise ValueError(f"E must be >= 1, got {self.E}")
        if self.tau < 1:
            raise ValueError(f"tau must be >= 1, got {self.tau}")


@dataclass(frozen=True, eq=False)
class ShadowManifold:
    """Lagged-coordinate reconstruction of one series.

    The point for time t is (x_t, x_{t-tau}, ..., x_{t-(E-1)tau}), so valid
    times run from (E-1)*tau through N-1 and the manifold holds
    M = N - (E-1)*tau points.

    Attributes
    ----------
    source : str
        Name of the embedded series.
    params : EmbeddingParams
    points : ndarray, shape (M, E)
        Read-only coordinate matrix, one row per manifold point.
    time_index : ndarray, shape (M,)
        Time t of each row's leading coordinate; strictly increasing.
    """

    source: str
    params: EmbeddingParams
    points: np.ndarray
    time_index: np.ndarray

    @property
    def m(self) -> int:
        return len(self.points)


def validate_series(raw, name: str) -> TimeSeries:
    """Check a raw sequence and wrap it as a TimeSeries.

    Parameters
    ----------
    raw : sequence of float
        Observations in time order.
    name : str
        Series label.

    Returns
    -------
    TimeSeries
        With values copied to a read-only float64 array.

    Raises
    ------
    TooShort
        If fewer than two observations.
    NonFiniteValue
        At the first NaN or infinite entry.
    """
    values = np.asarray(raw, dtype=np.float64).copy()
    if values.ndim != 1:
        raise ValueError(f"series {name!r} must be one-dimensional, got shape {values.shape}")
    if len(values) < 2:
        raise TooShort(f"series {name!r} has {len(values)} values, need at least 2")
    bad = ~np.isfinite(values)
    if bad.any():
        raise NonFiniteValue(int(np.flatnonzero(bad)[0]), name)
    return TimeSeries(name=name, values=_frozen(values))


def embed(series: TimeSeries, params: EmbeddingParams) -> ShadowManifold:
    """Build the shadow manifold of a series for given (E, tau).

    Parameters
    ----------
    series : TimeSeries
    params : EmbeddingParams

    Returns
    -------
    ShadowManifold
        M = N - (E-1)*tau points; row for time t is
        (x_t, x_{t-tau}, ..., x_{t-(E-1)tau}).

    Raises
    ------
    EmptyManifold
        If (E-1)*tau >= N.
    """
    e, tau = params.E, params.tau
    n = series.n
    t0 = (e - 1) * tau
    if t0 >= n:
        raise EmptyManifold(f"(E-1)*tau = {t0} leaves no points in a series of length {n}")
    m = n - t0
    # row t picks columns t, t-tau, ..., t-(E-1)tau
    idx = t0 + np.arange(m)[:, None] - np.arange(e)[None, :] * tau
    points = series.values[idx]
    return ShadowManifold(
        source=series.name,
        params=params,
        points=_frozen(points),
        time_index=_frozen(np.arange(t0, n)),
    )


def generate_coupled_logistic(
    n: int, beta_xy: float, beta_yx: float, seed: int
) -> tuple[TimeSeries, TimeSeries]:
    """Simulate a coupled two-species logistic map as synthetic ground truth.

    Iterates
        x_{t+1} = x_t * (3.8 - 3.8 x_t - beta_yx * y_t)
        y_{t+1} = y_t * (3.5 - 3.5 y_t - beta_xy * x_t)
    from seeded initial conditions in (0, 1), discards the first 100 steps
    so the returned segment starts on the attractor, and returns the next
    n values of each variable. beta_xy couples X into Y (X drives Y);
    beta_yx couples Y into X.

    Parameters
    ----------
    n : int
        Returned series length, >= 100.
    beta_xy, beta_yx : float
        Coupling strengths in [0, 1).
    seed : int
        Seeds the initial conditions; the map itself is deterministic.

    Returns
    -------
    (TimeSeries, TimeSeries)
        Series named "X" and "Y", values within [0, 1].

    Raises
    ------
    DegenerateOrbit
        If any iterate leaves [0, 1] (coupling too strong for the orbit).
    """
    if n < 100:
        raise ValueError(f"n must be >= 100, got {n}")
    for label, beta in (("beta_xy", beta_xy), ("beta_yx", beta_yx)):
        if not 0.0 <= beta < 1.0:
            raise ValueError(f"{label} must lie in [0, 1), got {beta}")
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0]))
    x, y = rng.uniform(0.1, 0.9, 2)
    total = n + TRANSIENT_STEPS
    xs = np.empty(total)
    ys = np.empty(total)
    for t in range(total):
        x, y = x * (3.8 - 3.8 * x - beta_yx * y), y * (3.5 - 3.5 * y - beta_xy * x)
        if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
            raise DegenerateOrbit(
                f"iterate left [0, 1] at step {t} (x={x:.4g}, y={y:.4g}); "
                f"couplings beta_xy={beta_xy}, beta_yx={beta_yx} are too strong"
            )
        xs[t] = x
        ys[t] = y
    return (
        TimeSeries(name="X", values=_frozen(xs[TRANSIENT_STEPS:])),
        TimeSeries(name="Y", values=_frozen(ys[TRANSIENT_STEPS:])),
    )
