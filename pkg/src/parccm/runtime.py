"""Execution backend for parameter sweeps.

Four modes realize increasing optimization levels of the same computation:

* naive: single-threaded, distances computed on the fly per task.
* parallel: a worker pool evaluates tasks concurrently, still table-free.
* indexed: per-(E, tau) pipelines run one after another; each builds its
  neighbor tables once, shares them read-only with all its tasks, then
  frees them.
* indexed-async: like indexed, but the next pipeline's tables are built in
  a background thread while the current pipeline's tasks run.

Tasks are pure functions of (seed, task tuple) over immutable shared state,
so every mode and worker count produces the identical record set; results
are keyed by task, never by arrival order.
"""
from __future__ import annotations

import threading
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass

from .errors import WorkerError

__all__ = [
    "MODE_KINDS",
    "ExecutionMode",
    "Pipeline",
    "PipelineTiming",
    "PipelineCompletion",
    "RunMetrics",
    "execute",
    "schedule_pipelines",
]

MODE_KINDS = ("naive", "parallel", "indexed", "indexed-async")


@dataclass(frozen=True)
class ExecutionMode:
    """A mode kind plus the requested parallelism degree.

    naive is single-threaded by definition, so it forces workers to 1.
    """

    kind: str
    workers: int = 1

    def __post_init__(self):
        if self.kind not in MODE_KINDS:
            raise ValueError(f"mode must be one of {MODE_KINDS}, got {self.kind!r}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if self.kind == "naive" and self.workers != 1:
            object.__setattr__(self, "workers", 1)

    @property
    def uses_table(self) -> bool:
        return self.kind in ("indexed", "indexed-async")


@dataclass(frozen=True)
class Pipeline:
    """All tasks of one (E, tau) cell, in submission order."""

    key: tuple[int, int]
    tasks: tuple


@dataclass(frozen=True)
class PipelineTiming:
    E: int
    tau: int
    build_seconds: float
    sweep_seconds: float


@dataclass(frozen=True)
class PipelineCompletion:
    """One completion-log entry; finished_at is relative to schedule start."""

    E: int
    tau: int
    finished_at: float


@dataclass(frozen=True)
class RunMetrics:
    """Wall-clock and memory accounting for one execute() call.

    build_seconds and sweep_seconds accumulate the per-pipeline phase
    durations (under indexed-async the build phase overlaps sweeps, so the
    accumulated build time can exceed its wall-clock share).
    peak_table_entries is the largest number of simultaneously live
    neighbor-table entries; an M-point table holds M*(M-1).
    """

    build_seconds: float
    sweep_seconds: float
    total_seconds: float
    task_count: int
    peak_table_entries: int
    pipeline_timings: tuple[PipelineTiming, ...]

    def to_dict(self) -> dict:
        return {
            "build_seconds": self.build_seconds,
            "sweep_seconds": self.sweep_seconds,
            "total_seconds": self.total_seconds,
            "task_count": self.task_count,
            "peak_table_entries": self.peak_table_entries,
            "pipelines": [
                {
                    "E": t.E,
                    "tau": t.tau,
                    "build_seconds": t.build_seconds,
                    "sweep_seconds": t.sweep_seconds,
                }
                for t in self.pipeline_timings
            ],
        }


class _TableLedger:
    """Tracks live and peak table entries across builder/main threads."""

    def __init__(self):
        self.live = 0
        self.peak = 0
        self._lock = threading.Lock()

    def built(self, entries: int):
        with self._lock:
            self.live += entries
            self.peak = max(self.peak, self.live)

    def released(self, entries: int):
        with self._lock:
            self.live -= entries


def _evaluate_sequential(shared, tasks, tables, out: dict):
    for task in tasks:
        try:
            out[task] = shared.evaluate(task, tables)
        except Exception as exc:
            raise WorkerError(task, exc) from exc


def _evaluate_pool(pool: ThreadPoolExecutor, shared, tasks, tables, out: dict):
    futures = [(task, pool.submit(shared.evaluate, task, tables)) for task in tasks]
    for task, fut in futures:
        try:
            out[task] = fut.result()
        except Exception as exc:
            for _, later in futures:
                later.cancel()
            raise WorkerError(task, exc) from exc


def schedule_pipelines(
    pipelines, shared, mode: ExecutionMode
) -> tuple[dict, list[PipelineCompletion], list[PipelineTiming], int]:
    """Run per-(E, tau) pipelines under the given mode.

    indexed completes pipelines strictly in submission order; indexed-async
    overlaps the next pipeline's table build with the current pipeline's
    task phase. The merged record dict is keyed by task and therefore
    independent of completion order.

    Parameters
    ----------
    pipelines : sequence of Pipeline
    shared : object
        Must provide evaluate(task, tables) -> record and, for indexed
        modes, build_tables(key) -> (tables, entry_count).
    mode : ExecutionMode

    Returns
    -------
    (records, completion_log, timings, peak_table_entries)
        records maps task -> record; completion_log is ordered by pipeline
        finish time.
    """
    if not pipelines:
        raise ValueError("need at least one pipeline")
    records: dict = {}
    log: list[PipelineCompletion] = []
    timings: list[PipelineTiming] = []
    ledger = _TableLedger()
    start = time.perf_counter()

    if mode.kind == "naive":
        for p in pipelines:
            t0 = time.perf_counter()
            _evaluate_sequential(shared, p.tasks, None, records)
            dt = time.perf_counter() - t0
            timings.append(PipelineTiming(p.key[0], p.key[1], 0.0, dt))
            log.append(PipelineCompletion(p.key[0], p.key[1], time.perf_counter() - start))
        return records, log, timings, ledger.peak

    if mode.kind == "parallel":
        with ThreadPoolExecutor(max_workers=mode.workers) as pool:
            _schedule_parallel(pool, pipelines, shared, records, log, timings, start)
        return records, log, timings, ledger.peak

    # indexed and indexed-async
    build_ahead = mode.kind == "indexed-async"

    def _build(key):
        b0 = time.perf_counter()
        tables, entries = shared.build_tables(key)
        ledger.built(entries)
        return tables, entries, time.perf_counter() - b0

    builder = ThreadPoolExecutor(max_workers=1) if build_ahead else None
    try:
        with ThreadPoolExecutor(max_workers=mode.workers) as pool:
            pending = builder.submit(_build, pipelines[0].key) if build_ahead else None
            for i, p in enumerate(pipelines):
                if build_ahead:
                    tables, entries, build_s = pending.result()
                    if i + 1 < len(pipelines):
                        pending = builder.submit(_build, pipelines[i + 1].key)
                else:
                    tables, entries, build_s = _build(p.key)
                s0 = time.perf_counter()
                _evaluate_pool(pool, shared, p.tasks, tables, records)
                sweep_s = time.perf_counter() - s0
                ledger.released(entries)
                del tables
                timings.append(PipelineTiming(p.key[0], p.key[1], build_s, sweep_s))
                log.append(
                    PipelineCompletion(p.key[0], p.key[1], time.perf_counter() - start)
                )
    finally:
        if builder is not None:
            builder.shutdown(wait=True)
    return records, log, timings, ledger.peak


def _schedule_parallel(pool, pipelines, shared, records, log, timings, start):
    """All tasks of all pipelines in one concurrent batch."""
    future_info = {}
    for p in pipelines:
        for task in p.tasks:
            future_info[pool.submit(shared.evaluate, task, None)] = (p.key, task)
    remaining = {p.key: len(p.tasks) for p in pipelines}
    sweep_start = time.perf_counter()
    failure = None
    for fut in as_completed(future_info):
        key, task = future_info[fut]
        try:
            records[task] = fut.result()
        except Exception as exc:
            failure = (task, exc)
            for later in future_info:
                later.cancel()
            break
        remaining[key] -= 1
        if remaining[key] == 0:
            now = time.perf_counter()
            timings.append(PipelineTiming(key[0], key[1], 0.0, now - sweep_start))
            log.append(PipelineCompletion(key[0], key[1], now - start))
    if failure is not None:
        task, exc = failure
        raise WorkerError(task, exc) from exc


def execute(tasks, shared, mode: ExecutionMode) -> tuple[list, RunMetrics]:
    """Evaluate every task under the given mode and collect metrics.

    Parameters
    ----------
    tasks : sequence
        Task tuples; grouped into pipelines by shared.pipeline_key(task) in
        first-appearance order (the submission order).
    shared : object
        Provides pipeline_key(task), evaluate(task, tables) and, for
        indexed modes, build_tables(key) -> (tables, entry_count).
    mode : ExecutionMode

    Returns
    -------
    (records, metrics)
        records in the order of the input task sequence, independent of
        mode, worker count, and scheduling.

    Raises
    ------
    ValueError
        If the task set is empty.
    WorkerError
        If a task raises; carries the failing task tuple.
    """
    tasks = list(tasks)
    if not tasks:
        raise ValueError("task set is empty")
    groups: dict = {}
    for task in tasks:
        groups.setdefault(shared.pipeline_key(task), []).append(task)
    pipelines = [Pipeline(key, tuple(ts)) for key, ts in groups.items()]
    t0 = time.perf_counter()
    records, _log, timings, peak = schedule_pipelines(pipelines, shared, mode)
    total = time.perf_counter() - t0
    metrics = RunMetrics(
        build_seconds=sum(t.build_seconds for t in timings),
        sweep_seconds=sum(t.sweep_seconds for t in timings),
        total_seconds=total,
        task_count=len(tasks),
        peak_table_entries=peak,
        pipeline_timings=tuple(timings),
    )
    return [records[t] for t in tasks], metrics
