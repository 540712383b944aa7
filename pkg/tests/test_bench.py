"""Tests for the benchmark harness: scenario shapes and report consistency."""
import json

import pytest

from parccm.bench import (
    BASELINE,
    SCENARIOS,
    run_scenario,
    scaled_baseline,
    scenario_cases,
    write_report,
)
from parccm.errors import UnknownScenario
from parccm.runtime import ExecutionMode


class TestScaledBaseline:
    def test_identity_at_full_scale(self):
        assert scaled_baseline(1.0) == BASELINE

    def test_half_scale(self):
        half = scaled_baseline(0.5)
        assert half["n"] == 2000
        assert half["r"] == 250
        assert half["L_grid"] == (250, 500, 1000)
        assert half["E_grid"] == BASELINE["E_grid"]
        assert half["tau_grid"] == BASELINE["tau_grid"]

    def test_grid_shape_preserved(self):
        tiny = scaled_baseline(0.03)
        assert len(tiny["L_grid"]) == 3
        assert tiny["E_grid"] == (1, 2, 4)

    def test_bad_scale(self):
        with pytest.raises(ValueError):
            scaled_baseline(0.0)
        with pytest.raises(ValueError):
            scaled_baseline(-1.0)


class TestScenarioCases:
    def test_baseline_single_case(self):
        _, cases = scenario_cases("baseline", 1.0)
        assert [name for name, _ in cases] == ["baseline"]
        assert cases[0][1] == {}

    def test_elasticity_l_varies_only_l(self):
        base, cases = scenario_cases("elasticity-L", 1.0)
        assert [name for name, _ in cases] == ["L=500", "L=1000", "L=2000"]
        for (_, overrides), v in zip(cases, base["L_grid"]):
            assert overrides == {"L_grid": (v,)}

    def test_elasticity_e_varies_only_e(self):
        _, cases = scenario_cases("elasticity-E", 1.0)
        assert [overrides for _, overrides in cases] == [
            {"E_grid": (1,)}, {"E_grid": (2,)}, {"E_grid": (4,)},
        ]

    def test_elasticity_tau_varies_only_tau(self):
        _, cases = scenario_cases("elasticity-tau", 1.0)
        assert [overrides for _, overrides in cases] == [
            {"tau_grid": (1,)}, {"tau_grid": (2,)}, {"tau_grid": (4,)},
        ]

    def test_unknown_scenario(self):
        with pytest.raises(UnknownScenario):
            scenario_cases("turbo", 1.0)
        assert "turbo" not in SCENARIOS


@pytest.fixture(scope="module")
def tiny_report():
    # Scale 0.03 gives N=120, r=15, L=(15, 30, 60): fast but real.
    return run_scenario(
        "elasticity-L",
        scale=0.03,
        modes=(ExecutionMode("naive"), ExecutionMode("indexed", 2)),
        repeats=2,
    )


class TestRunScenario:
    def test_report_shape(self, tiny_report):
        rep = tiny_report
        assert rep["schema"] == 1
        assert rep["scenario"] == "elasticity-L"
        assert rep["series"]["n"] == 120
        assert len(rep["cases"]) == 3
        for case in rep["cases"]:
            assert len(case["results"]) == 2
            for result in case["results"]:
                assert len(result["runs_seconds"]) == 2
                assert all(t > 0 for t in result["runs_seconds"])

    def test_means_match_raw_runs(self, tiny_report):
        for case in tiny_report["cases"]:
            for result in case["results"]:
                runs = result["runs_seconds"]
                assert result["mean_seconds"] == pytest.approx(sum(runs) / len(runs))

    def test_consecutive_ratios_recomputable(self, tiny_report):
        rep = tiny_report
        means = {
            (case["name"], f"{r['mode']}[w{r['workers']}]"): r["mean_seconds"]
            for case in rep["cases"]
            for r in case["results"]
        }
        for label, steps in rep["ratios"]["consecutive_cases"].items():
            for step in steps:
                expected = means[(step["to"], label)] / means[(step["from"], label)]
                assert step["ratio"] == pytest.approx(expected)

    def test_vs_first_mode_ratios_recomputable(self, tiny_report):
        rep = tiny_report
        means = {
            (case["name"], f"{r['mode']}[w{r['workers']}]"): r["mean_seconds"]
            for case in rep["cases"]
            for r in case["results"]
        }
        for name, by_mode in rep["ratios"]["vs_first_mode"].items():
            for label, ratio in by_mode.items():
                assert ratio == pytest.approx(
                    means[(name, label)] / means[(name, "naive[w1]")]
                )

    def test_single_case_has_no_consecutive_ratios(self):
        rep = run_scenario(
            "baseline", scale=0.03, modes=(ExecutionMode("indexed", 1),), repeats=1
        )
        assert "consecutive_cases" not in rep["ratios"]
        assert "vs_first_mode" not in rep["ratios"]

    def test_bad_repeats(self):
        with pytest.raises(ValueError):
            run_scenario("baseline", scale=0.03, repeats=0)

    def test_write_report_round_trip(self, tiny_report, tmp_path):
        p = tmp_path / "bench.json"
        write_report(tiny_report, p)
        assert json.loads(p.read_text()) == tiny_report
