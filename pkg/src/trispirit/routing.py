"""Layer-selection policy.

A task lands on the innermost layer whose urgency/complexity box contains
it: the reflex tier for tight-deadline, low-complexity work, the on-device
agent tier for moderate work, and the cloud-scale super tier otherwise.
All comparisons are strict, so boundary values fall to the next outer
layer. Habit-aware routing short-circuits to a compiled policy when one is
deployed for the task's class.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping

from .workload import ConfigurationError, Task, TaskType

__all__ = [
    "Thresholds",
    "LayerAssignment",
    "TradeoffCoefficients",
    "route",
    "route_with_habit",
    "objective_cost",
    "quality_penalty",
]


class LayerAssignment(enum.Enum):
    REFLEX = "reflex"
    AGENT = "agent"
    SUPER = "super"
    HABIT = "habit"


@dataclass(frozen=True)
class Thresholds:
    """Routing thresholds; the reflex box is nested inside the agent box."""

    tau_r: float = 0.25
    gamma_r: float = 0.30
    tau_a: float = 0.70
    gamma_a: float = 0.75

    def __post_init__(self) -> None:
        for name in ("tau_r", "gamma_r", "tau_a", "gamma_a"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ConfigurationError(f"threshold {name}={v} outside [0, 1]")
        if self.tau_r > self.tau_a:
            raise ConfigurationError(
                f"tau_r={self.tau_r} must not exceed tau_a={self.tau_a}"
            )
        if self.gamma_r > self.gamma_a:
            raise ConfigurationError(
                f"gamma_r={self.gamma_r} must not exceed gamma_a={self.gamma_a}"
            )


@dataclass(frozen=True)
class TradeoffCoefficients:
    """Weights of the latency/energy/quality objective."""

    alpha: float = 1.0
    beta: float = 1.0

    def __post_init__(self) -> None:
        import math

        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise ConfigurationError(f"{name}={v} must be finite and >= 0")


def route(task: Task, th: Thresholds = Thresholds()) -> LayerAssignment:
    """Assign a task to reflex, agent or super. Never returns HABIT."""
    if task.l < th.tau_r and task.c < th.gamma_r:
        return LayerAssignment.REFLEX
    if task.l < th.tau_a and task.c < th.gamma_a:
        return LayerAssignment.AGENT
    return LayerAssignment.SUPER


def _has_deployed_policy(registry: object, class_key: str) -> bool:
    if registry is None:
        return False
    if hasattr(registry, "deployed"):
        return bool(registry.deployed(class_key))
    if isinstance(registry, Mapping):
        policy = registry.get(class_key)
        if policy is None:
            return False
        status = getattr(policy, "status", None)
        name = getattr(status, "name", status)
        return name == "DEPLOYED" or name is None
    raise TypeError(f"unsupported registry type {type(registry)!r}")


def route_with_habit(
    task: Task,
    registry: object,
    th: Thresholds = Thresholds(),
) -> LayerAssignment:
    """Habit-aware routing.

    When the task's class has a deployed, non-invalidated policy the task
    bypasses the reasoning layers entirely; otherwise this is :func:`route`.
    ``registry`` may be a :class:`~trispirit.habit.HabitRegistry` or any
    mapping from class key to a policy object with a ``status`` attribute.
    """
    if _has_deployed_policy(registry, task.class_key):
        return LayerAssignment.HABIT
    return route(task, th)


def objective_cost(record, coeff: TradeoffCoefficients) -> float:
    """Scalar cost of one outcome: latency + alpha * energy + beta * penalty.

    ``record`` needs ``latency_ms``, ``energy_mj`` and ``quality_penalty``
    attributes; both simulation records and runtime outcomes qualify.
    """
    return (
        record.latency_ms
        + coeff.alpha * record.energy_mj
        + coeff.beta * record.quality_penalty
    )


#: Execution paths with cloud-scale reasoning capability.
_B_CAPABLE_PATHS = frozenset({"super", "cloud-baseline"})


def quality_penalty(kind: TaskType, path: str) -> float:
    """Binary quality-degradation penalty for one executed task.

    Zero whenever the executing path is capable of the task. Every path is
    capable for reactive and repeated-pattern tasks; reasoning tasks are
    penalised on any path below cloud-scale reasoning.
    """
    if kind is TaskType.REASONING_B and path not in _B_CAPABLE_PATHS:
        return 1.0
    return 0.0
