"""Parallel convergent cross mapping for causal inference on time-series pairs.

Workflow: validate or generate a series pair, embed each series as a shadow
manifold, cross-map one series from the other's manifold over growing random
libraries, and read causality off the convergence of prediction skill with
library size. A precomputed distance-indexing table and a data-parallel
sweep runtime keep large parameter grids fast; every execution mode yields
bit-identical results for a fixed seed.
"""
from .engine import (
    CellSummary,
    ConvergenceSummary,
    DEFAULT_MIN_DELTA,
    Direction,
    LevelStats,
    SkillRecord,
    SweepConfig,
    SweepState,
    Task,
    draw_library,
    evaluate_replicate,
    run_sweep,
    run_sweep_with_metrics,
    summarize_convergence,
    task_stream,
)
from .io import (
    emit_plot,
    ingest_csv,
    read_skills_csv,
    write_manifest_json,
    write_skills_csv,
    write_summary_json,
)
from .neighbors import LibraryMask, NeighborTable, build_table, knn_in_library, naive_knn
from .runtime import (
    ExecutionMode,
    Pipeline,
    PipelineCompletion,
    PipelineTiming,
    RunMetrics,
    execute,
    schedule_pipelines,
)
from .series import (
    EmbeddingParams,
    ShadowManifold,
    TimeSeries,
    embed,
    generate_coupled_logistic,
    validate_series,
)
from .xmap import CrossMapResult, cross_map, pearson, simplex_weights

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "TimeSeries",
    "EmbeddingParams",
    "ShadowManifold",
    "validate_series",
    "embed",
    "generate_coupled_logistic",
    "NeighborTable",
    "LibraryMask",
    "build_table",
    "knn_in_library",
    "naive_knn",
    "CrossMapResult",
    "simplex_weights",
    "cross_map",
    "pearson",
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
    "ExecutionMode",
    "Pipeline",
    "PipelineCompletion",
    "PipelineTiming",
    "RunMetrics",
    "execute",
    "schedule_pipelines",
    "ingest_csv",
    "write_skills_csv",
    "read_skills_csv",
    "write_summary_json",
    "write_manifest_json",
    "emit_plot",
]
