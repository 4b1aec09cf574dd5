"""Trace abstraction: align recent executions, extract a canonical trace.

The most central trace (the medoid under dynamic-time-warping distance) is
used as the alignment reference. Every other trace is DTW-aligned against
it with unit cost for an action-name mismatch and zero for a match.
Reference positions where every aligned action agrees on the name survive
into the canonical trace; positions contradicted by any trace are dropped.
Parameter values that are identical across all aligned actions stay
literal, values that differ become named slots bound to context-vector
components in discovery order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Sequence

__all__ = [
    "Action",
    "ExecutionTrace",
    "ActionTemplate",
    "CanonicalTrace",
    "AbstractionError",
    "dtw_align",
    "dtw_distance",
    "abstract_traces",
]


class AbstractionError(Exception):
    """No canonical trace could be extracted from the given traces."""


@dataclass(frozen=True)
class Action:
    """One executed action: a name plus concrete parameters."""

    name: str
    params: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"{self.name}({args})"


@dataclass(frozen=True)
class ExecutionTrace:
    """One observed execution: ordered actions plus the situational context."""

    class_key: str
    actions: tuple[Action, ...]
    context: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "actions", tuple(self.actions))
        object.__setattr__(self, "context", tuple(float(x) for x in self.context))
        if not self.actions:
            raise ValueError(f"trace for class {self.class_key!r} has no actions")

    @property
    def action_names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.actions)


@dataclass(frozen=True)
class ActionTemplate:
    """Action with fixed literals and named slots resolved from the context.

    ``slots`` maps a parameter name to the context component index it reads
    at execution time; the index is fixed at compile time.
    """

    name: str
    literals: Mapping[str, object] = field(default_factory=dict)
    slots: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "literals", MappingProxyType(dict(self.literals)))
        object.__setattr__(self, "slots", MappingProxyType(dict(self.slots)))
        overlap = set(self.literals) & set(self.slots)
        if overlap:
            raise ValueError(f"parameters {sorted(overlap)} are both literal and slot")

    def instantiate(self, context: Sequence[float]) -> Action:
        params = dict(self.literals)
        for key, idx in self.slots.items():
            if idx >= len(context):
                raise ValueError(
                    f"template {self.name!r} slot {key!r} reads context[{idx}] "
                    f"but context has dimension {len(context)}"
                )
            params[key] = context[idx]
        return Action(self.name, params)


@dataclass(frozen=True)
class CanonicalTrace:
    class_key: str
    templates: tuple[ActionTemplate, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "templates", tuple(self.templates))
        if not self.templates:
            raise ValueError("canonical trace must have at least one template")

    @property
    def slot_count(self) -> int:
        return sum(len(t.slots) for t in self.templates)


def _cost(a: str, b: str) -> int:
    return 0 if a == b else 1


def dtw_align(
    reference: Sequence[str], other: Sequence[str]
) -> list[tuple[int, int]]:
    """Optimal DTW path between two action-name sequences.

    Returns (reference index, other index) pairs covering both sequences.
    Cost is 0 for equal names and 1 otherwise; ties during backtracking
    prefer the diagonal step, then advancing the reference, so alignments
    are deterministic.
    """
    n, m = len(reference), len(other)
    inf = float("inf")
    acc = [[inf] * (m + 1) for _ in range(n + 1)]
    acc[0][0] = 0.0
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            c = _cost(reference[i - 1], other[j - 1])
            acc[i][j] = c + min(acc[i - 1][j - 1], acc[i - 1][j], acc[i][j - 1])

    path: list[tuple[int, int]] = []
    i, j = n, m
    while i > 0 and j > 0:
        path.append((i - 1, j - 1))
        steps = (
            (acc[i - 1][j - 1], i - 1, j - 1),  # diagonal preferred on ties
            (acc[i - 1][j], i - 1, j),
            (acc[i][j - 1], i, j - 1),
        )
        _, i, j = min(steps, key=lambda s: s[0])
        if (i, j) == (0, 0):
            break
    path.reverse()
    return path


def dtw_distance(reference: Sequence[str], other: Sequence[str]) -> float:
    n, m = len(reference), len(other)
    inf = float("inf")
    acc = [[inf] * (m + 1) for _ in range(n + 1)]
    acc[0][0] = 0.0
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            c = _cost(reference[i - 1], other[j - 1])
            acc[i][j] = c + min(acc[i - 1][j - 1], acc[i - 1][j], acc[i][j - 1])
    return acc[n][m]


def _medoid_index(traces: Sequence[ExecutionTrace]) -> int:
    names = [t.action_names for t in traces]
    totals = []
    for i in range(len(traces)):
        totals.append(sum(dtw_distance(names[i], names[j]) for j in range(len(traces)) if j != i))
    return int(min(range(len(traces)), key=lambda i: (totals[i], i)))


def abstract_traces(traces: Sequence[ExecutionTrace]) -> CanonicalTrace:
    """Abstract aligned traces of one class into a canonical trace.

    Requires at least two traces sharing a class key. Raises
    :class:`AbstractionError` when no reference position survives alignment,
    meaning the traces share no common action at all.
    """
    traces = list(traces)
    if len(traces) < 2:
        raise ValueError(f"need >= 2 traces to abstract, got {len(traces)}")
    keys = {t.class_key for t in traces}
    if len(keys) != 1:
        raise ValueError(f"traces span multiple classes: {sorted(keys)}")
    class_key = traces[0].class_key

    medoid_i = _medoid_index(traces)
    medoid = traces[medoid_i]
    others = [t for k, t in enumerate(traces) if k != medoid_i]

    # aligned[j] collects, per trace, the actions matched to medoid position j.
    aligned: list[list[list[Action]]] = [[] for _ in medoid.actions]
    for t in others:
        per_pos: list[list[Action]] = [[] for _ in medoid.actions]
        for ref_i, other_j in dtw_align(medoid.action_names, t.action_names):
            per_pos[ref_i].append(t.actions[other_j])
        for j, acts in enumerate(per_pos):
            aligned[j].append(acts)

    templates: list[ActionTemplate] = []
    slot_counter = 0
    for j, ref_action in enumerate(medoid.actions):
        # Keep the position only when every trace aligned a same-named
        # action here; aligned actions with other names are insertions the
        # warp consumed, and a trace with no match contradicts the position.
        matching = [
            [a for a in acts if a.name == ref_action.name] for acts in aligned[j]
        ]
        if not all(matching):
            continue
        literals: dict[str, object] = {}
        slots: dict[str, int] = {}
        for key, ref_value in ref_action.params.items():
            values = [ref_value]
            uniform = True
            for acts in matching:
                for a in acts:
                    if key not in a.params:
                        uniform = False
                        break
                    values.append(a.params[key])
                if not uniform:
                    break
            if uniform and all(v == ref_value for v in values):
                literals[key] = ref_value
            else:
                slots[key] = slot_counter
                slot_counter += 1
        templates.append(ActionTemplate(ref_action.name, literals, slots))

    if not templates:
        raise AbstractionError(
            f"class {class_key!r}: traces share no common action sequence"
        )
    return CanonicalTrace(class_key=class_key, templates=tuple(templates))
