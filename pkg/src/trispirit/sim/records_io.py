"""Result files: line-delimited records, CSV tables and JSON summaries.

Every artefact embeds the fully-resolved run configuration for provenance,
and all writers are deterministic (sorted keys, repr-precision floats), so
re-running an embedded configuration reproduces each file byte for byte.
CSV files start with a single ``# config: {...}`` comment line; readers
should skip lines starting with ``#``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from ..workload import TaskType
from .metrics import CI, SimRecord, SummaryStats
from .sweep import AblationResult, SweepCell

__all__ = [
    "write_records_jsonl",
    "read_records_jsonl",
    "summary_to_dict",
    "write_summary_json",
    "write_summary_csv",
    "write_sweep_csv",
    "write_sweep_json",
    "write_ablation_csv",
    "write_ablation_json",
    "write_attribution_csv",
]


def _record_to_dict(r: SimRecord) -> dict:
    return {
        "task_id": r.task_id,
        "kind": r.kind.code,
        "path": r.path,
        "latency_ms": r.latency_ms,
        "energy_mj": r.energy_mj,
        "model_calls": r.model_calls,
        "offline_ok": r.offline_ok,
        "quality_penalty": r.quality_penalty,
    }


def write_records_jsonl(
    records: Iterable[SimRecord], path: str | Path, config: Mapping | None = None
) -> None:
    """One JSON object per line; the first line carries the configuration."""
    lines = []
    if config is not None:
        lines.append(json.dumps({"config": dict(config)}, sort_keys=True))
    lines.extend(json.dumps(_record_to_dict(r), sort_keys=True) for r in records)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_records_jsonl(path: str | Path) -> tuple[list[SimRecord], dict | None]:
    records: list[SimRecord] = []
    config = None
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        d = json.loads(line)
        if "config" in d and "task_id" not in d:
            config = d["config"]
            continue
        records.append(
            SimRecord(
                task_id=d["task_id"],
                kind=TaskType.from_code(d["kind"]),
                path=d["path"],
                latency_ms=d["latency_ms"],
                energy_mj=d["energy_mj"],
                model_calls=d["model_calls"],
                offline_ok=d["offline_ok"],
                quality_penalty=d["quality_penalty"],
            )
        )
    return records, config


def _ci_to_dict(ci: CI) -> dict:
    return {"mean": ci.mean, "lo": ci.lo, "hi": ci.hi}


def summary_to_dict(stats: SummaryStats) -> dict:
    return {
        "n": stats.n,
        "latency_ms": _ci_to_dict(stats.latency),
        "latency_p95_ms": stats.latency_p95_ms,
        "energy_mj": _ci_to_dict(stats.energy),
        "model_calls": _ci_to_dict(stats.calls),
        "offline_pct": stats.offline_pct,
        "per_type": {k: asdict(v) for k, v in stats.per_type.items()},
        "per_path": {k: asdict(v) for k, v in stats.per_path.items()},
    }


def _dump_json(doc: dict, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def write_summary_json(
    stats: SummaryStats, path: str | Path, config: Mapping, label: str
) -> None:
    _dump_json(
        {"config": dict(config), "variant": label, "summary": summary_to_dict(stats)},
        path,
    )


_SUMMARY_COLUMNS = (
    "variant",
    "n",
    "mean_latency_ms",
    "latency_lo",
    "latency_hi",
    "latency_p95_ms",
    "mean_energy_mj",
    "energy_lo",
    "energy_hi",
    "mean_calls",
    "calls_lo",
    "calls_hi",
    "offline_pct",
)


def _summary_row(label: str, s: SummaryStats) -> list:
    return [
        label,
        s.n,
        repr(s.latency.mean),
        repr(s.latency.lo),
        repr(s.latency.hi),
        repr(s.latency_p95_ms),
        repr(s.energy.mean),
        repr(s.energy.lo),
        repr(s.energy.hi),
        repr(s.calls.mean),
        repr(s.calls.lo),
        repr(s.calls.hi),
        repr(s.offline_pct),
    ]


def _write_csv(
    path: str | Path, config: Mapping, header: Sequence[str], rows: Iterable[Sequence]
) -> None:
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(dict(config), sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def write_summary_csv(
    summaries: Mapping[str, SummaryStats], path: str | Path, config: Mapping
) -> None:
    rows = [_summary_row(label, s) for label, s in summaries.items()]
    _write_csv(path, config, _SUMMARY_COLUMNS, rows)


def write_sweep_csv(cells: Sequence[SweepCell], path: str | Path, config: Mapping) -> None:
    header = (
        "grid",
        "tau_r",
        "gamma_r",
        "tau_a",
        "gamma_a",
        "mean_latency_ms",
        "mean_energy_mj",
        "offline_pct",
    )
    rows = [
        [
            c.grid,
            repr(c.tau_r),
            repr(c.gamma_r),
            repr(c.tau_a),
            repr(c.gamma_a),
            repr(c.mean_latency_ms),
            repr(c.mean_energy_mj),
            repr(c.offline_pct),
        ]
        for c in cells
    ]
    _write_csv(path, config, header, rows)


def write_sweep_json(cells: Sequence[SweepCell], path: str | Path, config: Mapping) -> None:
    _dump_json({"config": dict(config), "cells": [asdict(c) for c in cells]}, path)


def write_ablation_csv(result: AblationResult, path: str | Path, config: Mapping) -> None:
    rows = [_summary_row(label, s) for label, s in result.summaries.items()]
    _write_csv(path, config, _SUMMARY_COLUMNS, rows)


def write_attribution_csv(result: AblationResult, path: str | Path, config: Mapping) -> None:
    a = result.attribution
    header = ("component", "saving_ms", "share_of_cloud_gap")
    rows = [
        ["local_execution", repr(a.local_execution_ms), repr(a.share_of_gap(a.local_execution_ms))],
        ["reflex", repr(a.reflex_ms), repr(a.share_of_gap(a.reflex_ms))],
        ["habit", repr(a.habit_ms), repr(a.share_of_gap(a.habit_ms))],
        [
            "routing_intelligence",
            repr(a.routing_intelligence_ms),
            repr(a.share_of_gap(a.routing_intelligence_ms)),
        ],
        ["total", repr(a.total_ms), repr(1.0)],
    ]
    _write_csv(path, config, header, rows)


def write_ablation_json(result: AblationResult, path: str | Path, config: Mapping) -> None:
    _dump_json(
        {
            "config": dict(config),
            "summaries": {k: summary_to_dict(s) for k, s in result.summaries.items()},
            "attribution": asdict(result.attribution),
        },
        path,
    )
