"""Replicate sweeps: library subsampling, skill records, convergence verdicts."""
from __future__ import annotations

import enum
import threading
from dataclasses import dataclass

import numpy as np

from .errors import ConfigInvalid, InsufficientLValues, InsufficientNeighbors, LibraryTooLarge
from .neighbors import LibraryMask, NeighborTable, build_table
from .runtime import ExecutionMode, RunMetrics, execute
from .series import EmbeddingParams, ShadowManifold, TimeSeries, embed
from .xmap import cross_map

__all__ = [
    "Direction",
    "Task",
    "SkillRecord",
    "SweepConfig",
    "SweepState",
    "LevelStats",
    "CellSummary",
    "ConvergenceSummary",
    "DEFAULT_MIN_DELTA",
    "task_stream",
    "draw_library",
    "evaluate_replicate",
    "run_sweep",
    "run_sweep_with_metrics",
    "summarize_convergence",
]

DEFAULT_MIN_DELTA = 0.1


class Direction(enum.Enum):
    """Which series is predicted from which manifold.

    X_FROM_MY predicts series X from the shadow manifold of Y; skill in
    this direction rising with library size indicates X causally drives Y.
    """

    X_FROM_MY = "X_from_MY"
    Y_FROM_MX = "Y_from_MX"


# fixed stream codes so task seeding never depends on enum ordering
_DIRECTION_CODE = {Direction.X_FROM_MY: 0, Direction.Y_FROM_MX: 1}


@dataclass(frozen=True)
class Task:
    """One replicate evaluation: a point in the sweep grid."""

    direction: Direction
    E: int
    tau: int
    L: int
    replicate: int


@dataclass(frozen=True)
class SkillRecord:
    """One prediction-skill measurement."""

    direction: Direction
    E: int
    tau: int
    L: int
    replicate: int
    rho: float
    degenerate: bool


@dataclass(frozen=True)
class SweepConfig:
    """Full description of a sweep.

    Attributes
    ----------
    r : int
        Replicates (independent library draws) per grid cell.
    L_grid, E_grid, tau_grid : tuples of int
        Library sizes, embedding dimensions, delays.
    seed : int
        Master seed; with the config it fully determines every record.
    directions : tuple of Direction
    mode : ExecutionMode
    """

    r: int
    L_grid: tuple[int, ...]
    E_grid: tuple[int, ...]
    tau_grid: tuple[int, ...]
    seed: int = 42
    directions: tuple[Direction, ...] = (Direction.X_FROM_MY, Direction.Y_FROM_MX)
    mode: ExecutionMode = ExecutionMode("naive")

    def __post_init__(self):
        object.__setattr__(self, "L_grid", tuple(int(v) for v in self.L_grid))
        object.__setattr__(self, "E_grid", tuple(int(v) for v in self.E_grid))
        object.__setattr__(self, "tau_grid", tuple(int(v) for v in self.tau_grid))
        object.__setattr__(self, "directions", tuple(self.directions))

    def validate(self, x: TimeSeries, y: TimeSeries):
        """Check every invariant against the series pair.

        Raises
        ------
        ConfigInvalid
            With the violated constraint named in the message.
        """
        if self.r < 1:
            raise ConfigInvalid(f"r must be >= 1, got {self.r}")
        if self.seed < 0:
            raise ConfigInvalid(f"seed must be >= 0, got {self.seed}")
        for label, grid in (("L", self.L_grid), ("E", self.E_grid), ("tau", self.tau_grid)):
            if not grid:
                raise ConfigInvalid(f"{label} grid must not be empty")
            if min(grid) < 1:
                raise ConfigInvalid(f"{label} grid values must be >= 1, got {min(grid)}")
            if len(set(grid)) != len(grid):
                raise ConfigInvalid(f"{label} grid values must be distinct, got {grid}")
        if not self.directions:
            raise ConfigInvalid("directions must not be empty")
        if not isinstance(self.mode, ExecutionMode):
            raise ConfigInvalid(f"mode must be an ExecutionMode, got {type(self.mode).__name__}")
        if x.n != y.n:
            raise ConfigInvalid(f"series lengths must match, got {x.n} and {y.n}")
        n = x.n
        min_m = None
        for e in self.E_grid:
            for tau in self.tau_grid:
                span = (e - 1) * tau
                if span >= n:
                    raise ConfigInvalid(
                        f"(E-1)*tau = {span} must stay below the series length {n} "
                        f"(E={e}, tau={tau})"
                    )
                m = n - span
                min_m = m if min_m is None else min(min_m, m)
        needed = max(self.E_grid) + 2
        if min(self.L_grid) < needed:
            raise ConfigInvalid(
                f"every L must be >= E+2 = {needed} for the largest E, got L={min(self.L_grid)}"
            )
        if max(self.L_grid) > min_m:
            raise ConfigInvalid(
                f"every L must be <= the smallest manifold size M = {min_m}, "
                f"got L={max(self.L_grid)}"
            )


@dataclass(frozen=True)
class LevelStats:
    """Skill statistics at one library size."""

    L: int
    mean_rho: float
    sd_rho: float
    count: int


@dataclass(frozen=True)
class CellSummary:
    """Convergence assessment of one (direction, E, tau) cell."""

    direction: Direction
    E: int
    tau: int
    levels: tuple[LevelStats, ...]
    delta_rho: float
    converged: bool


@dataclass(frozen=True)
class ConvergenceSummary:
    """Per-cell convergence verdicts for a whole sweep."""

    min_delta: float
    cells: tuple[CellSummary, ...]

    def cell(self, direction: Direction, e: int, tau: int) -> CellSummary:
        for c in self.cells:
            if c.direction is direction and c.E == e and c.tau == tau:
                return c
        raise KeyError(f"no cell for ({direction.value}, E={e}, tau={tau})")


def task_stream(seed: int, task: Task) -> np.random.Generator:
    """The task's private RNG stream.

    Derived from (seed, direction, E, tau, L, replicate) alone, so parallel
    scheduling order cannot perturb any draw.
    """
    return np.random.default_rng(
        np.random.SeedSequence(
            [seed, 1, _DIRECTION_CODE[task.direction], task.E, task.tau, task.L, task.replicate]
        )
    )


def draw_library(rng: np.random.Generator, library_size: int, m: int) -> LibraryMask:
    """Draw a uniform random library of distinct manifold points.

    Parameters
    ----------
    rng : numpy Generator
        The task's private stream.
    library_size : int
        L, at most m.
    m : int
        Manifold size.

    Returns
    -------
    LibraryMask
        L distinct indices drawn uniformly without replacement.

    Raises
    ------
    LibraryTooLarge
        If L exceeds m.
    """
    if library_size > m:
        raise LibraryTooLarge(f"L={library_size} exceeds manifold size M={m}")
    keys = rng.random(m)
    order = np.argsort(keys, kind="stable")
    return LibraryMask.from_indices(order[:library_size], m)


class SweepState:
    """Immutable shared inputs of one sweep run.

    Holds the series pair, the master seed, and eagerly built manifolds for
    every (direction, E, tau) the config needs; provides the task-evaluation
    and table-building hooks the runtime calls. Safe for concurrent use: all
    members are read-only after construction except two counters guarded by
    a lock.
    """

    def __init__(self, x: TimeSeries, y: TimeSeries, config: SweepConfig):
        self.x = x
        self.y = y
        self.config = config
        self.seed = config.seed
        self._manifolds: dict[tuple[Direction, int, int], ShadowManifold] = {}
        for e in config.E_grid:
            for tau in config.tau_grid:
                params = EmbeddingParams(E=e, tau=tau)
                embedded: dict[str, ShadowManifold] = {}
                for direction in config.directions:
                    target = y if direction is Direction.X_FROM_MY else x
                    if target.name not in embedded:
                        embedded[target.name] = embed(target, params)
                    self._manifolds[(direction, e, tau)] = embedded[target.name]
        self.tables_built = 0
        self._lock = threading.Lock()

    def source_series(self, direction: Direction) -> TimeSeries:
        return self.x if direction is Direction.X_FROM_MY else self.y

    def manifold(self, direction: Direction, e: int, tau: int) -> ShadowManifold:
        return self._manifolds[(direction, e, tau)]

    # runtime protocol

    def pipeline_key(self, task: Task) -> tuple[int, int]:
        return (task.E, task.tau)

    def build_tables(self, key: tuple[int, int]) -> tuple[dict[Direction, NeighborTable], int]:
        e, tau = key
        tables: dict[Direction, NeighborTable] = {}
        entries = 0
        built: dict[int, NeighborTable] = {}
        for direction in self.config.directions:
            manifold = self.manifold(direction, e, tau)
            ident = id(manifold)
            if ident not in built:
                built[ident] = build_table(manifold)
                entries += built[ident].entry_count
                with self._lock:
                    self.tables_built += 1
            tables[direction] = built[ident]
        return tables, entries

    def evaluate(self, task: Task, tables: dict[Direction, NeighborTable] | None) -> SkillRecord:
        table = tables[task.direction] if tables is not None else None
        return evaluate_replicate(task, self, table)


def evaluate_replicate(task: Task, shared: SweepState, table: NeighborTable | None = None) -> SkillRecord:
    """Evaluate one replicate: draw its library, cross-map, score.

    Pure function of (shared.seed, task) and the shared series; the optional
    table only changes the route, never the result. A library too small to
    supply neighbors yields a degenerate record with rho = 0 instead of
    raising, so sweeps are total.
    """
    manifold = shared.manifold(task.direction, task.E, task.tau)
    source = shared.source_series(task.direction)
    rng = task_stream(shared.seed, task)
    try:
        mask = draw_library(rng, task.L, manifold.m)
        result = cross_map(source, manifold, table, mask)
    except InsufficientNeighbors:
        return SkillRecord(
            direction=task.direction,
            E=task.E,
            tau=task.tau,
            L=task.L,
            replicate=task.replicate,
            rho=0.0,
            degenerate=True,
        )
    return SkillRecord(
        direction=task.direction,
        E=task.E,
        tau=task.tau,
        L=task.L,
        replicate=task.replicate,
        rho=result.rho,
        degenerate=result.degenerate,
    )


def _task_list(config: SweepConfig) -> list[Task]:
    return [
        Task(direction=d, E=e, tau=tau, L=library_size, replicate=rep)
        for e in config.E_grid
        for tau in config.tau_grid
        for d in config.directions
        for library_size in config.L_grid
        for rep in range(config.r)
    ]


def run_sweep_with_metrics(
    x: TimeSeries, y: TimeSeries, config: SweepConfig
) -> tuple[list[SkillRecord], RunMetrics]:
    """run_sweep plus the runtime's timing and memory metrics."""
    config.validate(x, y)
    state = SweepState(x, y, config)
    tasks = _task_list(config)
    return execute(tasks, state, config.mode)


def run_sweep(x: TimeSeries, y: TimeSeries, config: SweepConfig) -> list[SkillRecord]:
    """Evaluate the full sweep grid over a series pair.

    Returns
    -------
    list of SkillRecord
        Exactly |directions| * |E_grid| * |tau_grid| * |L_grid| * r records
        in canonical task order. For a fixed (seed, config) the records are
        identical across all execution modes and worker counts.

    Raises
    ------
    ConfigInvalid
        If the config violates an invariant against the series pair.
    """
    records, _ = run_sweep_with_metrics(x, y, config)
    return records


def summarize_convergence(
    records, min_delta: float = DEFAULT_MIN_DELTA
) -> ConvergenceSummary:
    """Aggregate records per (direction, E, tau) and judge convergence.

    Parameters
    ----------
    records : sequence of SkillRecord
    min_delta : float
        Convergence threshold on delta_rho (mean rho at the largest L minus
        mean rho at the smallest L).

    Returns
    -------
    ConvergenceSummary
        Per cell: mean and standard deviation of rho at each L, delta_rho,
        and converged = (delta_rho > min_delta) and (mean rho at max L > 0).

    Raises
    ------
    InsufficientLValues
        If any cell covers fewer than two distinct library sizes.
    """
    records = list(records)
    if not records:
        raise ValueError("no records to summarize")
    cells: dict[tuple, dict[int, list[float]]] = {}
    for rec in records:
        key = (rec.direction, rec.E, rec.tau)
        cells.setdefault(key, {}).setdefault(rec.L, []).append(rec.rho)
    summaries = []
    for (direction, e, tau), by_l in cells.items():
        if len(by_l) < 2:
            raise InsufficientLValues(
                f"cell ({direction.value}, E={e}, tau={tau}) covers "
                f"{len(by_l)} library size(s), need >= 2"
            )
        levels = tuple(
            LevelStats(
                L=library_size,
                mean_rho=float(np.mean(by_l[library_size])),
                sd_rho=float(np.std(by_l[library_size])),
                count=len(by_l[library_size]),
            )
            for library_size in sorted(by_l)
        )
        delta = levels[-1].mean_rho - levels[0].mean_rho
        converged = (delta > min_delta) and (levels[-1].mean_rho > 0.0)
        summaries.append(
            CellSummary(
                direction=direction,
                E=e,
                tau=tau,
                levels=levels,
                delta_rho=delta,
                converged=converged,
            )
        )
    return ConvergenceSummary(min_delta=min_delta, cells=tuple(summaries))
