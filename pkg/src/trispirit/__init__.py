"""trispirit: a three-layer cognitive runtime and its evaluation harness.

The library separates execution into a microsecond reflex tier, an
on-device agent tier and a cloud-scale super tier. A threshold routing
policy assigns work by latency urgency and cognitive complexity; repeated
task classes are compiled into zero-inference habit policies deployed to
the reflex tier and monitored for context drift; a priority message bus
coordinates the layers; and a seeded simulator reproduces the full
evaluation (main results, sensitivity grids, ablations) deterministically.
"""

from .bus import (
    BusError,
    BusStats,
    DuplicateIdError,
    ExpiredAtPublishError,
    Layer,
    MessageType,
    REFLEX_PRIORITY,
    SpiritBus,
    SpiritMessage,
)
from .habit import (
    AbstractionError,
    Action,
    ActionTemplate,
    CanonicalTrace,
    DriftVerdict,
    ExecutionTrace,
    HabitPolicy,
    HabitRegistry,
    HabitWeights,
    PolicyRevokedError,
    PolicyStatus,
    TaskClassStats,
    TraceLog,
    abstract_traces,
    compile_policy,
    detect_candidates,
    drift_check,
    habit_score,
    mmd2_unbiased,
    policy_from_text,
    policy_to_text,
    replay_policy,
    step_policy,
)
from .routing import (
    LayerAssignment,
    Thresholds,
    TradeoffCoefficients,
    objective_cost,
    quality_penalty,
    route,
    route_with_habit,
)
from .runtime import (
    CandidatePolicy,
    Feedback,
    GateConfig,
    GateDecision,
    GateVerdict,
    LayerInterface,
    MemoryState,
    Outcome,
    RiskRule,
    RuntimeConfig,
    TriSpiritRuntime,
    Trigger,
    VerifyRule,
    memory_update,
    reflex_queue_process,
    safety_gate,
)
from .sim import (
    CI,
    CostModel,
    PathCost,
    SimRecord,
    SummaryStats,
    SystemVariant,
    ablation_suite,
    bootstrap_ci,
    run_variant,
    sensitivity_sweep,
    summarize,
)
from .workload import (
    ConfigurationError,
    DEFAULT_MIXTURE,
    RngStreams,
    Task,
    TaskType,
    load_tasks,
    presample_noise,
    sample_tasks,
    save_tasks,
)

__version__ = "0.1.0"
