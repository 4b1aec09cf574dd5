"""Per-run metrics: records, summaries and bootstrap confidence intervals."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..workload import TaskType

__all__ = [
    "SimRecord",
    "CI",
    "TypeBreakdown",
    "SummaryStats",
    "bootstrap_ci",
    "nearest_rank_percentile",
    "summarize",
]

DEFAULT_RESAMPLES = 2000
DEFAULT_BOOTSTRAP_SEED = 99


@dataclass(frozen=True)
class SimRecord:
    """Outcome of one simulated task."""

    task_id: int
    kind: TaskType
    path: str
    latency_ms: float
    energy_mj: float
    model_calls: int
    offline_ok: bool
    quality_penalty: float = 0.0

    def __post_init__(self) -> None:
        if self.latency_ms < 0 or self.energy_mj < 0:
            raise ValueError(
                f"task {self.task_id}: negative cost "
                f"({self.latency_ms}, {self.energy_mj})"
            )
        if self.model_calls not in (0, 1, 2):
            raise ValueError(f"task {self.task_id}: model_calls {self.model_calls}")


@dataclass(frozen=True)
class CI:
    """Point estimate with a bootstrap 95% interval."""

    mean: float
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (self.lo <= self.mean <= self.hi):
            raise ValueError(f"CI out of order: {self.lo} <= {self.mean} <= {self.hi}")

    @property
    def width(self) -> float:
        return self.hi - self.lo


def bootstrap_ci(
    values: Sequence[float] | np.ndarray,
    resamples: int = DEFAULT_RESAMPLES,
    seed: int = DEFAULT_BOOTSTRAP_SEED,
) -> CI:
    """Percentile-method bootstrap CI of the mean.

    Resamples with replacement ``resamples`` times and takes the 2.5th and
    97.5th percentiles of the resampled means. The resampling RNG is seeded
    independently of the simulation streams, so intervals are reproducible
    and decoupled from the data generation.
    """
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("cannot bootstrap an empty sample")
    if resamples < 1:
        raise ValueError(f"resamples must be >= 1, got {resamples}")
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, arr.size, size=(resamples, arr.size))
    means = arr[idx].mean(axis=1)
    lo, hi = np.percentile(means, [2.5, 97.5])
    return CI(mean=float(arr.mean()), lo=float(lo), hi=float(hi))


def nearest_rank_percentile(values: Sequence[float] | np.ndarray, q: float) -> float:
    """Nearest-rank percentile: the value at rank ceil(q/100 * n)."""
    arr = np.sort(np.asarray(values, dtype=float))
    if arr.size == 0:
        raise ValueError("cannot take a percentile of an empty sample")
    if not (0 < q <= 100):
        raise ValueError(f"q must be in (0, 100], got {q}")
    rank = math.ceil(q / 100.0 * arr.size)
    return float(arr[rank - 1])


@dataclass(frozen=True)
class TypeBreakdown:
    count: int
    mean_latency_ms: float
    mean_energy_mj: float
    mean_calls: float
    offline_pct: float


@dataclass(frozen=True)
class SummaryStats:
    n: int
    latency: CI
    latency_p95_ms: float
    energy: CI
    calls: CI
    offline_pct: float
    per_type: dict[str, TypeBreakdown]
    per_path: dict[str, TypeBreakdown]


def _breakdown(records: list[SimRecord]) -> TypeBreakdown:
    lat = np.array([r.latency_ms for r in records])
    en = np.array([r.energy_mj for r in records])
    calls = np.array([r.model_calls for r in records], dtype=float)
    off = np.array([r.offline_ok for r in records], dtype=float)
    return TypeBreakdown(
        count=len(records),
        mean_latency_ms=float(lat.mean()),
        mean_energy_mj=float(en.mean()),
        mean_calls=float(calls.mean()),
        offline_pct=float(100.0 * off.mean()),
    )


def summarize(
    records: Iterable[SimRecord],
    resamples: int = DEFAULT_RESAMPLES,
    bootstrap_seed: int = DEFAULT_BOOTSTRAP_SEED,
) -> SummaryStats:
    """Aggregate records into means with CIs, P95 latency and breakdowns."""
    recs = list(records)
    if not recs:
        raise ValueError("cannot summarise zero records")

    lat = np.array([r.latency_ms for r in recs])
    en = np.array([r.energy_mj for r in recs])
    calls = np.array([r.model_calls for r in recs], dtype=float)
    off = np.array([r.offline_ok for r in recs], dtype=float)

    by_type: dict[str, list[SimRecord]] = {}
    by_path: dict[str, list[SimRecord]] = {}
    for r in recs:
        by_type.setdefault(r.kind.code, []).append(r)
        by_path.setdefault(r.path, []).append(r)

    return SummaryStats(
        n=len(recs),
        latency=bootstrap_ci(lat, resamples, bootstrap_seed),
        latency_p95_ms=nearest_rank_percentile(lat, 95.0),
        energy=bootstrap_ci(en, resamples, bootstrap_seed),
        calls=bootstrap_ci(calls, resamples, bootstrap_seed),
        offline_pct=float(100.0 * off.mean()),
        per_type={k: _breakdown(v) for k, v in sorted(by_type.items())},
        per_path={k: _breakdown(v) for k, v in sorted(by_path.items())},
    )
