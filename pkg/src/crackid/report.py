"""Report objects and file writers shared by the CLI and the benchmarks.

Reports are written as JSON (one document per run, schema version 1) plus
CSV files for anything tabular. CSV numeric fields carry 15 significant
digits; every file starts with a fixed header row. The JSON report embeds
the configuration echo and the master seed, so a report fully determines
a rerun; ``elapsed_seconds`` is the only field that varies between
identical reruns.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .ga import RunStatistics
from .inverse import Mesh, decode

__all__ = [
    "SCHEMA_VERSION",
    "fmt",
    "write_csv",
    "scenario_report",
    "write_report",
    "write_history_csv",
]

SCHEMA_VERSION = 1


def fmt(value) -> str:
    """Serialise one CSV field; floats get 15 significant digits."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.15g}"
    return str(value)


def write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def _crack_list(cracks, mesh: Mesh) -> list[dict]:
    nodes = list(mesh.nodes)
    out = []
    for crack in cracks:
        entry = {
            "position": crack.position,
            "intensity": crack.flexibility,
        }
        if crack.position in nodes:
            entry["node"] = nodes.index(crack.position) + 1
        out.append(entry)
    return out


def scenario_report(
    stats: RunStatistics,
    mesh: Mesh,
    config_echo: dict,
    seed: int,
    truth=None,
    extra: dict | None = None,
) -> dict:
    """Assemble the JSON-ready report for one identification run."""
    best = stats.best_event
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "seed": seed,
        "config": config_echo,
        "identified": {
            "best_event_index": stats.best_index,
            "best_fitness": best.best_fitness,
            "best_chromosome": list(best.best_chromosome.genes),
            "best_cracks": _crack_list(decode(best.best_chromosome, mesh), mesh),
            "per_event": [
                {
                    "event": i,
                    "fitness": event.best_fitness,
                    "cracks": _crack_list(decode(event.best_chromosome, mesh), mesh),
                }
                for i, event in enumerate(stats.events)
            ],
        },
        "statistics": {
            "events": len(stats.events),
            "success_count": stats.success_count,
            "cracks": [
                {
                    "mean_position": cs.mean_position,
                    "std_position": cs.std_position,
                    "mean_intensity": cs.mean_intensity,
                    "std_intensity": cs.std_intensity,
                    "matched_events": cs.matched_events,
                }
                for cs in stats.crack_stats
            ],
        },
        "elapsed_seconds": stats.elapsed_seconds,
    }
    if truth is not None:
        report["truth"] = [
            {"position": c.position, "intensity": c.flexibility} for c in truth
        ]
    if extra:
        report.update(extra)
    return report


def write_report(path: Path, report: dict) -> None:
    with open(path, "w") as handle:
        json.dump(report, handle, indent=2, sort_keys=True)
        handle.write("\n")


def write_history_csv(path: Path, stats: RunStatistics) -> None:
    """Per-generation mean fitness and diversity for every event."""
    rows = []
    for i, event in enumerate(stats.events):
        for g, (mean_fit, div) in enumerate(
            zip(event.fitness_history, event.diversity_history)
        ):
            rows.append([i, g + 1, mean_fit, div])
    write_csv(path, ["event", "generation", "mean_fitness", "diversity_pct"], rows)
