"""File formats: CSV ingestion, skills CSV, JSON reports, convergence plots.

The skills CSV uses the header ``direction,E,tau,L,replicate,rho,degenerate``
with rho printed at 17 significant digits so a round trip reproduces every
float bit for bit. JSON documents carry a ``schema`` version field.
"""
from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path

import numpy as np

from .engine import ConvergenceSummary, Direction, SkillRecord, SweepConfig
from .errors import MalformedSkillsFile, MissingColumn, ParseError, RaggedRows
from .runtime import RunMetrics
from .series import TimeSeries, validate_series

__all__ = [
    "SKILLS_HEADER",
    "ingest_csv",
    "write_skills_csv",
    "read_skills_csv",
    "summary_to_dict",
    "write_summary_json",
    "manifest_to_dict",
    "write_manifest_json",
    "sha256_file",
    "emit_plot",
]

SKILLS_HEADER = ("direction", "E", "tau", "L", "replicate", "rho", "degenerate")
SCHEMA_VERSION = 1


def ingest_csv(path, column_x: str, column_y: str) -> tuple[TimeSeries, TimeSeries]:
    """Read two named numeric columns from a headered CSV file.

    Parameters
    ----------
    path : path-like
    column_x, column_y : str
        Header names of the series to extract.

    Returns
    -------
    (TimeSeries, TimeSeries)
        Validated series in file row order.

    Raises
    ------
    MissingColumn
        If a requested column is absent from the header.
    RaggedRows
        If any row's field count differs from the header's.
    ParseError
        If a cell is not a number; rows are 1-based counting the header.
    """
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh)
        header = next(reader, None) or []
        columns = {name: i for i, name in enumerate(header)}
        for name in (column_x, column_y):
            if name not in columns:
                raise MissingColumn(name)
        ix, iy = columns[column_x], columns[column_y]
        xs: list[float] = []
        ys: list[float] = []
        for row_no, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise RaggedRows(
                    f"row {row_no} has {len(row)} fields, header has {len(header)}"
                )
            for idx, name, out in ((ix, column_x, xs), (iy, column_y, ys)):
                cell = row[idx]
                try:
                    out.append(float(cell))
                except ValueError:
                    raise ParseError(row_no, name, cell) from None
    return validate_series(xs, column_x), validate_series(ys, column_y)


def write_skills_csv(records, path):
    """Write skill records, one per row, in the given order."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SKILLS_HEADER)
        for rec in records:
            writer.writerow(
                [
                    rec.direction.value,
                    rec.E,
                    rec.tau,
                    rec.L,
                    rec.replicate,
                    f"{rec.rho:.17g}",
                    "true" if rec.degenerate else "false",
                ]
            )


def read_skills_csv(path) -> list[SkillRecord]:
    """Read a skills CSV back into records, bit-exact on rho.

    Raises
    ------
    MalformedSkillsFile
        If the header is wrong, the file holds no rows, or a cell does not
        parse.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != SKILLS_HEADER:
            raise MalformedSkillsFile(
                f"expected header {','.join(SKILLS_HEADER)}, got {header}"
            )
        records = []
        for row_no, row in enumerate(reader, start=2):
            if len(row) != len(SKILLS_HEADER):
                raise MalformedSkillsFile(f"row {row_no} has {len(row)} fields")
            try:
                records.append(
                    SkillRecord(
                        direction=Direction(row[0]),
                        E=int(row[1]),
                        tau=int(row[2]),
                        L=int(row[3]),
                        replicate=int(row[4]),
                        rho=float(row[5]),
                        degenerate={"true": True, "false": False}[row[6]],
                    )
                )
            except (ValueError, KeyError) as exc:
                raise MalformedSkillsFile(f"row {row_no}: {exc}") from exc
    if not records:
        raise MalformedSkillsFile("no skill rows")
    return records


def summary_to_dict(summary: ConvergenceSummary) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "min_delta": summary.min_delta,
        "cells": [
            {
                "direction": cell.direction.value,
                "E": cell.E,
                "tau": cell.tau,
                "levels": [
                    {
                        "L": lv.L,
                        "mean_rho": lv.mean_rho,
                        "sd_rho": lv.sd_rho,
                        "count": lv.count,
                    }
                    for lv in cell.levels
                ],
                "delta_rho": cell.delta_rho,
                "converged": cell.converged,
            }
            for cell in summary.cells
        ],
    }


def write_summary_json(summary: ConvergenceSummary, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(summary_to_dict(summary), fh, indent=2)
        fh.write("\n")


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def manifest_to_dict(
    config: SweepConfig,
    inputs: list[dict],
    metrics: RunMetrics,
    version: str,
    status: str,
    extra: dict | None = None,
) -> dict:
    doc = {
        "schema": SCHEMA_VERSION,
        "tool": "parccm",
        "version": version,
        "status": status,
        "config": {
            "r": config.r,
            "L_grid": list(config.L_grid),
            "E_grid": list(config.E_grid),
            "tau_grid": list(config.tau_grid),
            "seed": config.seed,
            "directions": [d.value for d in config.directions],
            "mode": {"kind": config.mode.kind, "workers": config.mode.workers},
        },
        "inputs": inputs,
        "metrics": metrics.to_dict(),
    }
    if extra:
        doc.update(extra)
    return doc


def write_manifest_json(doc: dict, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def _aggregate(records):
    """Mean/sd of rho per (direction, E, tau, L), sorted for plotting."""
    cells: dict[tuple, dict[int, list[float]]] = {}
    for rec in records:
        cells.setdefault((rec.direction, rec.E, rec.tau), {}).setdefault(rec.L, []).append(
            rec.rho
        )
    rows = []
    for (direction, e, tau) in sorted(cells, key=lambda k: (k[0].value, k[1], k[2])):
        by_l = cells[(direction, e, tau)]
        for library_size in sorted(by_l):
            vals = by_l[library_size]
            rows.append(
                (
                    direction,
                    e,
                    tau,
                    library_size,
                    float(np.mean(vals)),
                    float(np.std(vals)),
                    len(vals),
                )
            )
    return rows


def emit_plot(skills_csv_path, out_path) -> tuple[Path, Path]:
    """Plot mean rho vs L per (direction, E, tau) with +/-1 sd bands.

    Parameters
    ----------
    skills_csv_path : path-like
        A skills CSV as written by write_skills_csv.
    out_path : path-like
        Destination; must end in .svg or .pdf (vector output).

    Returns
    -------
    (plot_path, aggregates_path)
        The aggregates CSV holds exactly the plotted numbers, so the figure
        is independently checkable.

    Raises
    ------
    MalformedSkillsFile
        If the skills CSV is empty or invalid.
    """
    out_path = Path(out_path)
    if out_path.suffix not in (".svg", ".pdf"):
        raise ValueError(f"out path must end in .svg or .pdf, got {out_path.suffix!r}")
    records = read_skills_csv(skills_csv_path)
    rows = _aggregate(records)

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4.5))
    by_curve: dict[tuple, list] = {}
    for direction, e, tau, library_size, mean, sd, _count in rows:
        by_curve.setdefault((direction, e, tau), []).append((library_size, mean, sd))
    for (direction, e, tau), pts in by_curve.items():
        ls = [p[0] for p in pts]
        means = np.array([p[1] for p in pts])
        sds = np.array([p[2] for p in pts])
        label = f"{direction.value} E={e} tau={tau}"
        (line,) = ax.plot(ls, means, marker="o", label=label)
        ax.fill_between(ls, means - sds, means + sds, alpha=0.2, color=line.get_color())
    ax.set_xlabel("library size L")
    ax.set_ylabel("cross-map skill rho")
    ax.legend(fontsize=7)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)

    aggregates_path = out_path.with_suffix(".aggregates.csv")
    with open(aggregates_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["direction", "E", "tau", "L", "mean_rho", "sd_rho", "count"])
        for direction, e, tau, library_size, mean, sd, count in rows:
            writer.writerow(
                [direction.value, e, tau, library_size, f"{mean:.17g}", f"{sd:.17g}", count]
            )
    return out_path, aggregates_path
