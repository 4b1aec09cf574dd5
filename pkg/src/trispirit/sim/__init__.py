"""Seeded evaluation harness: cost models, system variants, metrics,
bootstrap confidence intervals, the sensitivity grid and the ablation suite.
"""

from .costs import BASELINE_PATHS, CostModel, CostSample, PathCost, sample_cost
from .metrics import (
    CI,
    SimRecord,
    SummaryStats,
    bootstrap_ci,
    nearest_rank_percentile,
    summarize,
)
from .records_io import (
    read_records_jsonl,
    write_records_jsonl,
)
from .sweep import (
    AblationResult,
    Attribution,
    SweepCell,
    ablation_suite,
    sensitivity_sweep,
)
from .variants import SystemVariant, assign_paths, habit_registry_for, run_variant

__all__ = [
    "BASELINE_PATHS",
    "CI",
    "CostModel",
    "CostSample",
    "PathCost",
    "SimRecord",
    "SummaryStats",
    "SweepCell",
    "SystemVariant",
    "AblationResult",
    "Attribution",
    "ablation_suite",
    "assign_paths",
    "bootstrap_ci",
    "habit_registry_for",
    "nearest_rank_percentile",
    "read_records_jsonl",
    "run_variant",
    "sample_cost",
    "sensitivity_sweep",
    "summarize",
    "write_records_jsonl",
]
