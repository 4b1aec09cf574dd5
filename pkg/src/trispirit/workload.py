"""Synthetic task workload generation with reproducible RNG streams.

Tasks carry two scalar attributes, latency urgency ``l`` and cognitive
complexity ``c``, both in [0, 1]. Low ``l`` means a tighter deadline.
Attributes are drawn uniformly from per-type boxes so that reactive tasks
cluster in the low-urgency/low-complexity corner, reasoning tasks in the
high-complexity region, and repeated-pattern tasks near the reactive ones.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "TaskType",
    "Task",
    "RngStreams",
    "DEFAULT_MIXTURE",
    "ATTRIBUTE_BOUNDS",
    "sample_tasks",
    "presample_noise",
    "save_tasks",
    "load_tasks",
]


class TaskType(enum.Enum):
    """The three workload classes."""

    REACTIVE_A = "A"
    REASONING_B = "B"
    REPEATED_C = "C"

    @property
    def code(self) -> str:
        return self.value

    @classmethod
    def from_code(cls, code: str) -> "TaskType":
        for t in cls:
            if t.value == code:
                return t
        raise ValueError(f"unknown task type code {code!r}")


#: Default mixture weights for (A, B, C).
DEFAULT_MIXTURE: tuple[float, float, float] = (0.60, 0.30, 0.10)

#: Per-type uniform attribute boxes: type -> ((l_lo, l_hi), (c_lo, c_hi)).
ATTRIBUTE_BOUNDS: dict[TaskType, tuple[tuple[float, float], tuple[float, float]]] = {
    TaskType.REACTIVE_A: ((0.0, 0.28), (0.0, 0.35)),
    TaskType.REASONING_B: ((0.25, 1.0), (0.55, 1.0)),
    TaskType.REPEATED_C: ((0.0, 0.40), (0.0, 0.45)),
}


@dataclass(frozen=True)
class Task:
    """One unit of work.

    ``l`` and ``c`` must lie in [0, 1]. Generated workloads additionally keep
    them inside the per-type boxes of :data:`ATTRIBUTE_BOUNDS`; the constructor
    does not enforce the boxes so that synthetic probe tasks can be built for
    routing experiments.
    """

    id: int
    kind: TaskType
    l: float
    c: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.l <= 1.0):
            raise ValueError(f"task {self.id}: l={self.l} outside [0, 1]")
        if not (0.0 <= self.c <= 1.0):
            raise ValueError(f"task {self.id}: c={self.c} outside [0, 1]")

    @property
    def class_key(self) -> str:
        """Habit class key; the simulator keys habit policies by task type."""
        return self.kind.name


# Spawn keys for derived substreams. Values are arbitrary but frozen:
# changing any one changes every seeded result in the evaluation.
_SPAWN_KEYS = {
    "tasks": 23,
    "noise": 1000,
    "route-shuffle": 2000,
}


@dataclass(frozen=True)
class RngStreams:
    """Named, independent random streams derived from two seeds.

    Every consumer (task synthesis, the shared noise table, the random-route
    shuffle) gets its own substream spawned from ``primary_seed``, so streams
    never interleave and each draw sequence is reproducible regardless of the
    order in which consumers run. Bootstrap resampling uses a separate
    ``bootstrap_seed`` so confidence intervals are decoupled from the
    simulated data.
    """

    primary_seed: int = 42
    bootstrap_seed: int = 99

    def stream(self, name: str) -> np.random.Generator:
        try:
            key = _SPAWN_KEYS[name]
        except KeyError:
            raise KeyError(
                f"unknown stream {name!r}; expected one of {sorted(_SPAWN_KEYS)}"
            ) from None
        return np.random.default_rng(
            np.random.SeedSequence(self.primary_seed, spawn_key=(key,))
        )

    def bootstrap_rng(self) -> np.random.Generator:
        return np.random.default_rng(self.bootstrap_seed)


class ConfigurationError(ValueError):
    """Raised for invalid mixtures, weights, thresholds or cost models."""


def _validate_mixture(mixture: Sequence[float]) -> np.ndarray:
    mix = np.asarray(mixture, dtype=float)
    if mix.shape != (3,):
        raise ConfigurationError(f"mixture must have 3 weights, got {mix.shape}")
    if np.any(mix < 0):
        raise ConfigurationError(f"mixture weights must be non-negative: {mix.tolist()}")
    if abs(mix.sum() - 1.0) > 1e-9:
        raise ConfigurationError(f"mixture weights must sum to 1, got {mix.sum()!r}")
    return mix


def sample_tasks(
    n: int,
    mixture: Sequence[float] = DEFAULT_MIXTURE,
    rng: RngStreams | None = None,
) -> list[Task]:
    """Draw ``n`` tasks from the per-type attribute boxes.

    Tasks are generated in id order; each task consumes three uniforms from
    the task substream in the fixed order (type, l, c), with the type chosen
    by inverse CDF over the mixture. Identical seeds therefore give
    bit-identical task lists.
    """
    if n < 1:
        raise ConfigurationError(f"n must be >= 1, got {n}")
    mix = _validate_mixture(mixture)
    rng = rng or RngStreams()

    u = rng.stream("tasks").random((n, 3))
    cum = np.cumsum(mix)
    kinds = np.searchsorted(cum[:-1], u[:, 0], side="right")
    types = list(TaskType)

    tasks: list[Task] = []
    for i in range(n):
        kind = types[int(kinds[i])]
        (l_lo, l_hi), (c_lo, c_hi) = ATTRIBUTE_BOUNDS[kind]
        tasks.append(
            Task(
                id=i,
                kind=kind,
                l=float(l_lo + u[i, 1] * (l_hi - l_lo)),
                c=float(c_lo + u[i, 2] * (c_hi - c_lo)),
            )
        )
    return tasks


#: Noise table column layout. Columns 0 and 1 drive latency and energy for
#: the system execution paths; columns 2 and 3 are the equivalent draws for
#: the baseline paths, so baselines have their own fixed per-task randomness.
NOISE_COLUMNS = ("latency", "energy", "baseline_latency", "baseline_energy")


def presample_noise(
    n: int,
    dims: int = len(NOISE_COLUMNS),
    rng: RngStreams | None = None,
) -> np.ndarray:
    """Pre-sample the per-task standard-normal noise table, frozen thereafter.

    The table is shared by every system variant and every threshold
    configuration, so changing thresholds can never change a (task, path)
    cost draw. The returned array is read-only.
    """
    if n < 1 or dims < 1:
        raise ConfigurationError(f"n and dims must be >= 1, got n={n} dims={dims}")
    rng = rng or RngStreams()
    table = rng.stream("noise").standard_normal((n, dims))
    table.flags.writeable = False
    return table


# Task sets are exchanged as tab-separated text, one task per line:
#   id<TAB>kind<TAB>l<TAB>c
# with kind in {A, B, C} and floats in full repr precision. Lines starting
# with '#' are comments.
_TASK_HEADER = "# trispirit tasks v1: id\tkind\tl\tc"


def save_tasks(tasks: Iterable[Task], path: str | Path) -> None:
    lines = [_TASK_HEADER]
    for t in tasks:
        lines.append(f"{t.id}\t{t.kind.code}\t{t.l!r}\t{t.c!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_tasks(path: str | Path) -> list[Task]:
    tasks: list[Task] = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise ValueError(f"{path}:{lineno}: expected 4 fields, got {len(parts)}")
        tasks.append(
            Task(
                id=int(parts[0]),
                kind=TaskType.from_code(parts[1]),
                l=float(parts[2]),
                c=float(parts[3]),
            )
        )
    return tasks
