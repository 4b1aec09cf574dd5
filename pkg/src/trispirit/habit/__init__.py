"""Habit formation pipeline.

Repeated task classes are detected by a frequency/consistency/similarity
score, their recent execution traces are aligned and abstracted into a
canonical action-template sequence, the sequence is compiled into a
deterministic finite-state policy with zero reasoning-model calls, and
deployed policies are monitored for context drift with a kernel two-sample
statistic that invalidates them when the context distribution moves.
"""

from .abstraction import (
    AbstractionError,
    Action,
    ActionTemplate,
    CanonicalTrace,
    ExecutionTrace,
    abstract_traces,
    dtw_align,
    dtw_distance,
)
from .drift import DriftVerdict, drift_check, mmd2_unbiased, rbf_bandwidth
from .policy import (
    HabitPolicy,
    HabitRegistry,
    PolicyRevokedError,
    PolicyStatus,
    compile_policy,
    policy_from_text,
    policy_to_text,
    replay_policy,
    step_policy,
)
from .scoring import (
    HabitWeights,
    TaskClassStats,
    TraceLog,
    class_stats,
    detect_candidates,
    habit_score,
)

__all__ = [
    "AbstractionError",
    "Action",
    "ActionTemplate",
    "CanonicalTrace",
    "DriftVerdict",
    "ExecutionTrace",
    "HabitPolicy",
    "HabitRegistry",
    "HabitWeights",
    "PolicyRevokedError",
    "PolicyStatus",
    "TaskClassStats",
    "TraceLog",
    "abstract_traces",
    "class_stats",
    "compile_policy",
    "detect_candidates",
    "drift_check",
    "dtw_align",
    "dtw_distance",
    "habit_score",
    "mmd2_unbiased",
    "policy_from_text",
    "policy_to_text",
    "rbf_bandwidth",
    "replay_policy",
    "step_policy",
]
