"""Benchmark harness: wall-time scenarios over the sweep engine.

The baseline scenario is a full grid (N=4000, r=500, L in {500,1000,2000},
E and tau in {1,2,4}); elasticity scenarios pin one parameter to each of its
baseline values in turn while the others keep the baseline grids, isolating
that parameter's runtime impact. A scale factor shrinks N, r, and the
L grid uniformly so any scenario fits on a small host; grid shape is
preserved. Every measurement is repeated and reported with its raw runs, so
published ratios are checkable from the report itself.
"""
from __future__ import annotations

import json
import time

from .engine import SweepConfig, run_sweep
from .errors import UnknownScenario
from .runtime import ExecutionMode
from .series import generate_coupled_logistic

__all__ = ["SCENARIOS", "BASELINE", "scaled_baseline", "scenario_cases", "run_scenario", "write_report"]

BASELINE = {
    "n": 4000,
    "r": 500,
    "L_grid": (500, 1000, 2000),
    "E_grid": (1, 2, 4),
    "tau_grid": (1, 2, 4),
}

SCENARIOS = ("baseline", "elasticity-L", "elasticity-E", "elasticity-tau", "modes")


def scaled_baseline(scale: float) -> dict:
    """Baseline parameters with N, r, and the L grid shrunk by `scale`."""
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale}")
    return {
        "n": max(2, round(BASELINE["n"] * scale)),
        "r": max(1, round(BASELINE["r"] * scale)),
        "L_grid": tuple(max(1, round(v * scale)) for v in BASELINE["L_grid"]),
        "E_grid": BASELINE["E_grid"],
        "tau_grid": BASELINE["tau_grid"],
    }


def scenario_cases(scenario: str, scale: float) -> tuple[dict, list[tuple[str, dict]]]:
    """The scaled base parameters and the scenario's case list.

    Each case is (name, grid overrides); elasticity cases replace exactly
    one grid with a single value.

    Raises
    ------
    UnknownScenario
        If the name is not one of SCENARIOS.
    """
    if scenario not in SCENARIOS:
        raise UnknownScenario(f"scenario must be one of {SCENARIOS}, got {scenario!r}")
    base = scaled_baseline(scale)
    if scenario in ("baseline", "modes"):
        cases = [("baseline", {})]
    elif scenario == "elasticity-L":
        cases = [(f"L={v}", {"L_grid": (v,)}) for v in base["L_grid"]]
    elif scenario == "elasticity-E":
        cases = [(f"E={v}", {"E_grid": (v,)}) for v in base["E_grid"]]
    else:
        cases = [(f"tau={v}", {"tau_grid": (v,)}) for v in base["tau_grid"]]
    return base, cases


def _mode_label(mode: ExecutionMode) -> str:
    return f"{mode.kind}[w{mode.workers}]"


def run_scenario(
    scenario: str,
    scale: float = 1.0,
    modes=(ExecutionMode("naive"), ExecutionMode("indexed-async")),
    seed: int = 42,
    repeats: int = 3,
    beta_xy: float = 0.1,
    beta_yx: float = 0.0,
) -> dict:
    """Measure a scenario's wall times across modes.

    Parameters
    ----------
    scenario : str
        One of SCENARIOS.
    scale : float
        Uniform shrink factor on N, r, and the L grid.
    modes : sequence of ExecutionMode
    seed : int
        Seeds both the synthetic series and every sweep.
    repeats : int
        Measurements per (case, mode); means are reported with raw runs.
    beta_xy, beta_yx : float
        Couplings of the synthetic input pair.

    Returns
    -------
    dict
        JSON-ready report: per-case raw timings and means per mode, plus
        consecutive-case ratios per mode (elasticity scenarios) and
        per-case ratios against the first mode.
    """
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    base, cases = scenario_cases(scenario, scale)
    x, y = generate_coupled_logistic(base["n"], beta_xy, beta_yx, seed)
    modes = list(modes)
    report_cases = []
    means: dict[tuple[str, str], float] = {}
    for name, overrides in cases:
        params = {**base, **overrides}
        results = []
        for mode in modes:
            config = SweepConfig(
                r=params["r"],
                L_grid=params["L_grid"],
                E_grid=params["E_grid"],
                tau_grid=params["tau_grid"],
                seed=seed,
                mode=mode,
            )
            runs = []
            for _ in range(repeats):
                t0 = time.perf_counter()
                run_sweep(x, y, config)
                runs.append(time.perf_counter() - t0)
            mean = sum(runs) / len(runs)
            means[(name, _mode_label(mode))] = mean
            results.append(
                {
                    "mode": mode.kind,
                    "workers": mode.workers,
                    "runs_seconds": runs,
                    "mean_seconds": mean,
                }
            )
        report_cases.append(
            {
                "name": name,
                "config": {
                    "n": base["n"],
                    "r": params["r"],
                    "L_grid": list(params["L_grid"]),
                    "E_grid": list(params["E_grid"]),
                    "tau_grid": list(params["tau_grid"]),
                },
                "results": results,
            }
        )
    ratios: dict = {}
    if len(cases) > 1:
        consecutive = {}
        for mode in modes:
            label = _mode_label(mode)
            steps = []
            for (a, _), (b, _) in zip(cases, cases[1:]):
                steps.append(
                    {"from": a, "to": b, "ratio": means[(b, label)] / means[(a, label)]}
                )
            consecutive[label] = steps
        ratios["consecutive_cases"] = consecutive
    if len(modes) > 1:
        first = _mode_label(modes[0])
        ratios["vs_first_mode"] = {
            name: {
                _mode_label(m): means[(name, _mode_label(m))] / means[(name, first)]
                for m in modes[1:]
            }
            for name, _ in cases
        }
    return {
        "schema": 1,
        "scenario": scenario,
        "scale": scale,
        "seed": seed,
        "repeats": repeats,
        "series": {"n": base["n"], "beta_xy": beta_xy, "beta_yx": beta_yx},
        "modes": [{"kind": m.kind, "workers": m.workers} for m in modes],
        "cases": report_cases,
        "ratios": ratios,
    }


def write_report(report: dict, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
