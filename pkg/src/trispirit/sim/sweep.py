"""Sensitivity grid and ablation suite.

The sensitivity sweep evaluates the habit-enabled system over three grids
sharing one noise table: the reflex-threshold grid crossed with a band of
reflex-complexity cutoffs, the agent-threshold grid crossed with a band of
agent-complexity cutoffs, and the full reflex-by-agent threshold heatmap at
default complexity cutoffs. Cells report plain means; confidence intervals
belong to the ablation summaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..routing import Thresholds
from ..workload import RngStreams, Task
from .costs import CostModel
from .metrics import DEFAULT_BOOTSTRAP_SEED, DEFAULT_RESAMPLES, SummaryStats, summarize
from .variants import SystemVariant, run_variant

__all__ = [
    "SweepCell",
    "sensitivity_sweep",
    "Attribution",
    "AblationResult",
    "ablation_suite",
]

TAU_R_GRID = tuple(np.linspace(0.10, 0.40, 10))
GAMMA_R_BAND = (0.20, 0.25, 0.30, 0.35, 0.40)
TAU_A_GRID = tuple(np.linspace(0.50, 0.90, 10))
GAMMA_A_BAND = (0.60, 0.65, 0.70, 0.75, 0.80)


@dataclass(frozen=True)
class SweepCell:
    grid: str  # "tau_r", "tau_a" or "heatmap"
    tau_r: float
    gamma_r: float
    tau_a: float
    gamma_a: float
    mean_latency_ms: float
    mean_energy_mj: float
    offline_pct: float


def _cell(
    grid: str,
    th: Thresholds,
    tasks: Sequence[Task],
    noise,
    cost_model: CostModel,
    variant: SystemVariant,
    rng: RngStreams | None,
) -> SweepCell:
    records = run_variant(tasks, variant, th, cost_model, noise, rng)
    lat = sum(r.latency_ms for r in records) / len(records)
    en = sum(r.energy_mj for r in records) / len(records)
    off = 100.0 * sum(r.offline_ok for r in records) / len(records)
    return SweepCell(
        grid=grid,
        tau_r=th.tau_r,
        gamma_r=th.gamma_r,
        tau_a=th.tau_a,
        gamma_a=th.gamma_a,
        mean_latency_ms=lat,
        mean_energy_mj=en,
        offline_pct=off,
    )


def sensitivity_sweep(
    tasks: Sequence[Task],
    noise,
    cost_model: CostModel = CostModel(),
    variant: SystemVariant = SystemVariant.TS_FULL,
    rng: RngStreams | None = None,
    defaults: Thresholds = Thresholds(),
    tau_r_grid: Sequence[float] = TAU_R_GRID,
    gamma_r_band: Sequence[float] = GAMMA_R_BAND,
    tau_a_grid: Sequence[float] = TAU_A_GRID,
    gamma_a_band: Sequence[float] = GAMMA_A_BAND,
) -> list[SweepCell]:
    """Evaluate the threshold grids; every cell shares the same noise."""
    cells: list[SweepCell] = []
    for gamma_r in gamma_r_band:
        for tau_r in tau_r_grid:
            th = Thresholds(tau_r, gamma_r, defaults.tau_a, defaults.gamma_a)
            cells.append(_cell("tau_r", th, tasks, noise, cost_model, variant, rng))
    for gamma_a in gamma_a_band:
        for tau_a in tau_a_grid:
            th = Thresholds(defaults.tau_r, defaults.gamma_r, tau_a, gamma_a)
            cells.append(_cell("tau_a", th, tasks, noise, cost_model, variant, rng))
    for tau_r in tau_r_grid:
        for tau_a in tau_a_grid:
            th = Thresholds(tau_r, defaults.gamma_r, tau_a, defaults.gamma_a)
            cells.append(_cell("heatmap", th, tasks, noise, cost_model, variant, rng))
    return cells


ABLATION_ORDER = (
    SystemVariant.CLOUD_CENTRIC,
    SystemVariant.EDGE_ONLY,
    SystemVariant.TS_LOCAL_ONLY,
    SystemVariant.TS_RANDOM_ROUTE,
    SystemVariant.TS_NO_REFLEX,
    SystemVariant.TS_NO_HABIT,
    SystemVariant.TS_FULL,
    SystemVariant.TS_MAIN_NO_HABIT,
)


@dataclass(frozen=True)
class Attribution:
    """Latency-saving decomposition from pairwise variant differences.

    Savings are in milliseconds; each share is the saving divided by the
    total cloud-to-full-system gap. Components interact, so shares do not
    add up to exactly one.
    """

    local_execution_ms: float
    reflex_ms: float
    habit_ms: float
    routing_intelligence_ms: float
    total_ms: float

    def share_of_gap(self, component_ms: float) -> float:
        return component_ms / self.total_ms if self.total_ms else 0.0


@dataclass(frozen=True)
class AblationResult:
    summaries: dict[str, SummaryStats]
    attribution: Attribution


def ablation_suite(
    tasks: Sequence[Task],
    noise,
    thresholds: Thresholds = Thresholds(),
    cost_model: CostModel = CostModel(),
    rng: RngStreams | None = None,
    resamples: int = DEFAULT_RESAMPLES,
    bootstrap_seed: int = DEFAULT_BOOTSTRAP_SEED,
) -> AblationResult:
    """Run every variant on shared noise and decompose the latency gains."""
    summaries: dict[str, SummaryStats] = {}
    for variant in ABLATION_ORDER:
        records = run_variant(tasks, variant, thresholds, cost_model, noise, rng)
        summaries[variant.value] = summarize(records, resamples, bootstrap_seed)

    mean = {v: summaries[v].latency.mean for v in summaries}
    cloud = mean[SystemVariant.CLOUD_CENTRIC.value]
    full = mean[SystemVariant.TS_FULL.value]
    attribution = Attribution(
        local_execution_ms=cloud - mean[SystemVariant.TS_LOCAL_ONLY.value],
        reflex_ms=mean[SystemVariant.TS_NO_REFLEX.value] - full,
        habit_ms=mean[SystemVariant.TS_NO_HABIT.value] - full,
        routing_intelligence_ms=mean[SystemVariant.TS_RANDOM_ROUTE.value] - full,
        total_ms=cloud - full,
    )
    return AblationResult(summaries=summaries, attribution=attribution)
