"""Habit-candidate detection over a sliding window of execution traces.

A task class scores high when it occurs often (frequency), arrives at
regular intervals (temporal consistency, one minus the coefficient of
variation of inter-arrival times) and recurs in similar situations (mean
pairwise cosine similarity of its context vectors). Classes whose weighted
score strictly exceeds the promotion threshold are flagged for compilation.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from ..workload import ConfigurationError
from .abstraction import ExecutionTrace

__all__ = [
    "HabitWeights",
    "TaskClassStats",
    "TraceLog",
    "class_stats",
    "detect_candidates",
    "habit_score",
]


def _clamp01(x: float) -> float:
    return min(1.0, max(0.0, x))


def _identity(x: float) -> float:
    return x


def _sigmoid(x: float) -> float:
    # Rescaled logistic that maps [0, 1] onto [0, 1] with fixed endpoints.
    lo, hi = 1.0 / (1.0 + math.e**4), 1.0 / (1.0 + math.e**-4)
    raw = 1.0 / (1.0 + math.exp(-8.0 * (x - 0.5)))
    return (raw - lo) / (hi - lo)


_SQUASHERS: dict[str, Callable[[float], float]] = {
    "identity": _identity,
    "sigmoid": _sigmoid,
}


@dataclass(frozen=True)
class HabitWeights:
    """Score weights, squashing choice and promotion threshold."""

    w_f: float = 0.4
    w_c: float = 0.3
    w_s: float = 0.3
    delta: float = 0.75
    squash: str = "identity"

    def __post_init__(self) -> None:
        if min(self.w_f, self.w_c, self.w_s) < 0:
            raise ConfigurationError("habit weights must be non-negative")
        total = self.w_f + self.w_c + self.w_s
        if abs(total - 1.0) > 1e-9:
            raise ConfigurationError(f"habit weights must sum to 1, got {total!r}")
        if self.squash not in _SQUASHERS:
            raise ConfigurationError(
                f"unknown squasher {self.squash!r}; expected one of {sorted(_SQUASHERS)}"
            )

    @property
    def squasher(self) -> Callable[[float], float]:
        return _SQUASHERS[self.squash]


@dataclass(frozen=True)
class TaskClassStats:
    """Clamped score components for one task class."""

    class_key: str
    frequency: float
    consistency: float
    similarity: float

    def __post_init__(self) -> None:
        for name in ("frequency", "consistency", "similarity"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name}={v} outside [0, 1]; clamp before constructing")


def habit_score(stats: TaskClassStats, w: HabitWeights = HabitWeights()) -> float:
    """Weighted sum of squashed components; lies in [0, 1]."""
    f = w.squasher(stats.frequency)
    c = w.squasher(stats.consistency)
    s = w.squasher(stats.similarity)
    return w.w_f * f + w.w_c * c + w.w_s * s


class TraceLog:
    """Sliding-window log of (arrival time, trace) pairs."""

    def __init__(self, maxlen: int = 500):
        self._entries: deque[tuple[float, ExecutionTrace]] = deque(maxlen=maxlen)

    def append(self, trace: ExecutionTrace, at: float) -> None:
        self._entries.append((at, trace))

    @property
    def window(self) -> list[tuple[float, ExecutionTrace]]:
        return list(self._entries)

    def recent(self, class_key: str, n: int) -> list[ExecutionTrace]:
        """The up-to-n most recent traces of one class, oldest first."""
        hits = [t for _, t in self._entries if t.class_key == class_key]
        return hits[-n:]

    def __len__(self) -> int:
        return len(self._entries)


def _consistency(times: Sequence[float]) -> float:
    # 1 - CoV of inter-arrival times; a single occurrence gives no intervals.
    if len(times) < 2:
        return 0.0
    gaps = np.diff(np.asarray(times, dtype=float))
    mean = gaps.mean()
    if mean <= 0:
        return 0.0
    return _clamp01(1.0 - gaps.std() / mean)


def _similarity(contexts: Sequence[np.ndarray]) -> float:
    # Mean pairwise cosine similarity, clamped to [0, 1].
    if len(contexts) < 2:
        return 0.0
    mat = np.asarray(contexts, dtype=float)
    norms = np.linalg.norm(mat, axis=1)
    safe = np.where(norms > 0, norms, 1.0)
    unit = mat / safe[:, None]
    unit[norms == 0] = 0.0
    gram = unit @ unit.T
    m = len(contexts)
    iu = np.triu_indices(m, k=1)
    return _clamp01(float(gram[iu].mean()))


def class_stats(
    window: Iterable[tuple[float, ExecutionTrace]],
) -> dict[str, TaskClassStats]:
    """Per-class score components over a window of (time, trace) pairs."""
    entries = list(window)
    if not entries:
        raise ValueError("trace window is empty")
    by_class: dict[str, list[tuple[float, ExecutionTrace]]] = {}
    for at, trace in entries:
        by_class.setdefault(trace.class_key, []).append((at, trace))

    total = len(entries)
    stats = {}
    for key, items in by_class.items():
        times = [at for at, _ in items]
        contexts = [np.asarray(t.context, dtype=float) for _, t in items]
        stats[key] = TaskClassStats(
            class_key=key,
            frequency=_clamp01(len(items) / total),
            consistency=_consistency(times),
            similarity=_similarity(contexts),
        )
    return stats


def detect_candidates(
    window: "TraceLog | Iterable[tuple[float, ExecutionTrace]]",
    w: HabitWeights = HabitWeights(),
) -> list[tuple[str, float]]:
    """Classes whose score strictly exceeds the promotion threshold.

    Returns (class_key, score) pairs sorted by descending score. A score
    exactly equal to the threshold is not promoted.
    """
    if isinstance(window, TraceLog):
        window = window.window
    candidates = [
        (key, habit_score(st, w))
        for key, st in class_stats(window).items()
    ]
    flagged = [(key, s) for key, s in candidates if s > w.delta]
    flagged.sort(key=lambda pair: (-pair[1], pair[0]))
    return flagged
