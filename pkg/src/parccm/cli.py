"""Command-line front end.

Subcommands
-----------
run
    Ingest a CSV, sweep the grid, and write skills.csv, summary.json, and
    manifest.json into the output directory.
bench
    Run a named benchmark scenario and write its JSON report.
plot
    Render mean-skill-vs-L curves from a skills CSV.

Exit codes: 0 success, 1 configuration error, 2 input/output error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .bench import SCENARIOS, run_scenario, write_report
from .engine import (
    DEFAULT_MIN_DELTA,
    Direction,
    SweepConfig,
    run_sweep_with_metrics,
    summarize_convergence,
)
from .errors import (
    ConfigInvalid,
    MalformedSkillsFile,
    MissingColumn,
    NonFiniteValue,
    ParseError,
    RaggedRows,
    TooShort,
    UnknownScenario,
)
from .io import (
    emit_plot,
    ingest_csv,
    manifest_to_dict,
    sha256_file,
    write_manifest_json,
    write_skills_csv,
    write_summary_json,
)
from .runtime import MODE_KINDS, ExecutionMode

__all__ = ["main", "entry", "cmd_run", "cmd_bench", "cmd_plot"]


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _directions(text: str) -> tuple[Direction, ...]:
    try:
        return tuple(Direction(part) for part in text.split(","))
    except ValueError:
        valid = ",".join(d.value for d in Direction)
        raise argparse.ArgumentTypeError(
            f"expected a comma-separated subset of {{{valid}}}, got {text!r}"
        )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parccm",
        description="Convergent cross mapping over time-series pairs",
    )
    parser.add_argument("--version", action="version", version=f"parccm {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="sweep a series pair and write results")
    run.add_argument("--input", required=True, help="input CSV with a header row")
    run.add_argument("--x", required=True, help="column name of series X")
    run.add_argument("--y", required=True, help="column name of series Y")
    run.add_argument("--E", type=_int_list, default=(1, 2, 4), help="embedding dimensions, e.g. 1,2,4")
    run.add_argument("--tau", type=_int_list, default=(1, 2, 4), help="embedding delays, e.g. 1,2,4")
    run.add_argument("--L", type=_int_list, default=(500, 1000, 2000), help="library sizes, e.g. 500,1000,2000")
    run.add_argument("--r", type=int, default=500, help="replicates per grid cell")
    run.add_argument("--seed", type=int, default=42, help="master seed")
    run.add_argument("--mode", choices=MODE_KINDS, default="indexed-async")
    run.add_argument("--workers", type=int, default=1)
    run.add_argument(
        "--directions",
        type=_directions,
        default=(Direction.X_FROM_MY, Direction.Y_FROM_MX),
        help="comma-separated subset of {X_from_MY,Y_from_MX}",
    )
    run.add_argument("--min-delta", type=float, default=DEFAULT_MIN_DELTA, help="convergence threshold on delta rho")
    run.add_argument("--out", required=True, help="output directory")
    run.set_defaults(handler=cmd_run)

    bench = sub.add_parser("bench", help="measure a benchmark scenario")
    bench.add_argument("--scenario", required=True, help=f"one of {', '.join(SCENARIOS)}")
    bench.add_argument("--scale", type=float, default=1.0, help="uniform shrink of N, r, and the L grid")
    bench.add_argument(
        "--modes",
        default="naive,parallel,indexed,indexed-async",
        help="comma-separated mode kinds to measure",
    )
    bench.add_argument("--workers", type=int, default=1)
    bench.add_argument("--repeats", type=int, default=3)
    bench.add_argument("--seed", type=int, default=42)
    bench.add_argument("--out", default=".", help="output directory")
    bench.set_defaults(handler=cmd_bench)

    plot = sub.add_parser("plot", help="plot skill-vs-L curves from a skills CSV")
    plot.add_argument("--skills", required=True, help="skills CSV path")
    plot.add_argument("--out", required=True, help="output .svg or .pdf path")
    plot.set_defaults(handler=cmd_plot)
    return parser


def cmd_run(args) -> int:
    x, y = ingest_csv(args.input, args.x, args.y)
    config = SweepConfig(
        r=args.r,
        L_grid=args.L,
        E_grid=args.E,
        tau_grid=args.tau,
        seed=args.seed,
        directions=args.directions,
        mode=ExecutionMode(args.mode, args.workers),
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    records, metrics = run_sweep_with_metrics(x, y, config)
    skills_path = out / "skills.csv"
    write_skills_csv(records, skills_path)
    summary = summarize_convergence(records, args.min_delta)
    summary_path = out / "summary.json"
    write_summary_json(summary, summary_path)
    manifest = manifest_to_dict(
        config,
        inputs=[{"path": str(args.input), "sha256": sha256_file(args.input)}],
        metrics=metrics,
        version=__version__,
        status="complete",
        extra={
            "columns": {"x": args.x, "y": args.y},
            "n": x.n,
            "min_delta": args.min_delta,
            "outputs": ["skills.csv", "summary.json", "manifest.json"],
        },
    )
    write_manifest_json(manifest, out / "manifest.json")
    print(f"wrote {len(records)} skill records to {skills_path}")
    for cell in summary.cells:
        print(
            f"  {cell.direction.value} E={cell.E} tau={cell.tau}: "
            f"delta_rho={cell.delta_rho:+.4f} converged={str(cell.converged).lower()}"
        )
    return 0


def cmd_bench(args) -> int:
    kinds = [part.strip() for part in args.modes.split(",") if part.strip()]
    for kind in kinds:
        if kind not in MODE_KINDS:
            raise ConfigInvalid(f"mode must be one of {MODE_KINDS}, got {kind!r}")
    modes = [ExecutionMode(kind, args.workers) for kind in kinds]
    report = run_scenario(
        args.scenario,
        scale=args.scale,
        modes=modes,
        seed=args.seed,
        repeats=args.repeats,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"bench_{args.scenario}.json"
    write_report(report, path)
    print(f"wrote {path}")
    for case in report["cases"]:
        for result in case["results"]:
            print(
                f"  {case['name']:>10s} {result['mode']}[w{result['workers']}]: "
                f"{result['mean_seconds']:.3f}s over {len(result['runs_seconds'])} runs"
            )
    return 0


def cmd_plot(args) -> int:
    plot_path, aggregates_path = emit_plot(args.skills, args.out)
    print(f"wrote {plot_path} and {aggregates_path}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code == 0:
            raise
        return 1
    try:
        return args.handler(args)
    except (MissingColumn, RaggedRows, ParseError, NonFiniteValue, TooShort, MalformedSkillsFile) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    except (ConfigInvalid, UnknownScenario, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
