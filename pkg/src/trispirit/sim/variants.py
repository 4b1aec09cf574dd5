"""System variants: the two baselines, the full system and its ablations.

All variants consume the same task set and the same frozen noise table, so
differences between them come from path assignment alone. The random-route
variant reproduces the full system's per-path counts exactly but assigns
them to tasks by a seeded shuffle, which isolates the value of matching
tasks to layers by type.
"""

from __future__ import annotations

import enum
from typing import Sequence

from ..habit import ActionTemplate, CanonicalTrace, HabitPolicy, compile_policy
from ..routing import Thresholds, quality_penalty, route, route_with_habit
from ..workload import RngStreams, Task, TaskType
from .costs import CostModel, sample_cost
from .metrics import SimRecord

__all__ = ["SystemVariant", "assign_paths", "habit_registry_for", "run_variant"]


class SystemVariant(enum.Enum):
    CLOUD_CENTRIC = "cloud-centric"
    EDGE_ONLY = "edge-only"
    TS_LOCAL_ONLY = "ts-local-only"
    TS_RANDOM_ROUTE = "ts-random-route"
    TS_NO_REFLEX = "ts-no-reflex"
    TS_NO_HABIT = "ts-no-habit"
    TS_FULL = "ts-full"
    # The main-results configuration: threshold routing with habit disabled.
    # Behaviourally identical to TS_NO_HABIT; kept as its own variant so the
    # main table and the ablation table stay separately addressable.
    TS_MAIN_NO_HABIT = "ts-main-no-habit"


def habit_registry_for(class_keys: Sequence[str]) -> dict[str, HabitPolicy]:
    """Minimal deployed policies for the given classes.

    The simulator only needs deployed-policy lookups to succeed; each policy
    is a single-template chain that replays one parameterless action.
    """
    registry: dict[str, HabitPolicy] = {}
    for key in class_keys:
        canonical = CanonicalTrace(
            class_key=key, templates=(ActionTemplate(name="replay"),)
        )
        registry[key] = compile_policy(canonical, [[0.0]])
    return registry


DEFAULT_HABIT_CLASSES = (TaskType.REPEATED_C.name,)


def assign_paths(
    tasks: Sequence[Task],
    variant: SystemVariant,
    thresholds: Thresholds = Thresholds(),
    rng: RngStreams | None = None,
    habit_classes: Sequence[str] = DEFAULT_HABIT_CLASSES,
) -> list[str]:
    """Execution path per task for one variant."""
    if variant is SystemVariant.CLOUD_CENTRIC:
        return ["cloud-baseline"] * len(tasks)
    if variant is SystemVariant.EDGE_ONLY:
        return ["edge-baseline"] * len(tasks)

    if variant in (SystemVariant.TS_NO_HABIT, SystemVariant.TS_MAIN_NO_HABIT):
        return [route(t, thresholds).value for t in tasks]

    if variant is SystemVariant.TS_LOCAL_ONLY:
        paths = [route(t, thresholds).value for t in tasks]
        return ["agent" if p == "super" else p for p in paths]

    registry = habit_registry_for(habit_classes)
    full = [route_with_habit(t, registry, thresholds).value for t in tasks]

    if variant is SystemVariant.TS_FULL:
        return full
    if variant is SystemVariant.TS_NO_REFLEX:
        return ["agent" if p == "reflex" else p for p in full]
    if variant is SystemVariant.TS_RANDOM_ROUTE:
        # Same per-path counts as the full system, shuffled over tasks with
        # a dedicated substream so counts stay exact and runs reproducible.
        rng = rng or RngStreams()
        pool = list(full)
        rng.stream("route-shuffle").shuffle(pool)
        return pool
    raise ValueError(f"unhandled variant {variant!r}")


def run_variant(
    tasks: Sequence[Task],
    variant: SystemVariant,
    thresholds: Thresholds = Thresholds(),
    cost_model: CostModel = CostModel(),
    noise=None,
    rng: RngStreams | None = None,
    habit_classes: Sequence[str] = DEFAULT_HABIT_CLASSES,
) -> list[SimRecord]:
    """Simulate one variant over the task set with shared noise."""
    if noise is None:
        raise ValueError("run_variant requires the pre-sampled noise table")
    if len(noise) < len(tasks):
        raise ValueError(
            f"noise table covers {len(noise)} tasks but workload has {len(tasks)}"
        )
    paths = assign_paths(tasks, variant, thresholds, rng, habit_classes)
    records = []
    for task, path in zip(tasks, paths):
        cost = sample_cost(path, task.id, noise, cost_model)
        records.append(
            SimRecord(
                task_id=task.id,
                kind=task.kind,
                path=path,
                latency_ms=cost.latency_ms,
                energy_mj=cost.energy_mj,
                model_calls=cost.model_calls,
                offline_ok=not cost.requires_network,
                quality_penalty=quality_penalty(task.kind, path),
            )
        )
    return records
