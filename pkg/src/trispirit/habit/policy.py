"""Finite-state habit policies compiled from canonical traces.

A compiled policy is a linear chain: one state per action template plus a
terminal state, with exactly one outgoing transition per non-terminal
state. Stepping a policy is constant-time in the trace length and performs
no reasoning-model invocation. The compile-time context sample is retained
on the policy as the drift-detection baseline.
"""

from __future__ import annotations

import enum
import json
import threading
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .abstraction import Action, ActionTemplate, CanonicalTrace

__all__ = [
    "PolicyStatus",
    "PolicyRevokedError",
    "HabitPolicy",
    "HabitRegistry",
    "compile_policy",
    "step_policy",
    "replay_policy",
    "policy_to_text",
    "policy_from_text",
]

POLICY_FORMAT_VERSION = 1


class PolicyStatus(enum.Enum):
    DEPLOYED = "deployed"
    INVALIDATED = "invalidated"


class PolicyRevokedError(Exception):
    """Stepping was attempted on an invalidated policy."""


@dataclass
class HabitPolicy:
    """Deterministic chain FSM for one task class.

    ``transitions`` maps each non-terminal state name to its action template
    and successor. ``status`` flips to INVALIDATED when drift is detected,
    after which the policy refuses to execute and habit-aware routing falls
    back to the threshold policy.
    """

    class_key: str
    states: tuple[str, ...]
    initial_state: str
    terminal_state: str
    transitions: dict[str, tuple[ActionTemplate, str]]
    baseline_contexts: np.ndarray
    status: PolicyStatus = PolicyStatus.DEPLOYED

    def __post_init__(self) -> None:
        self.baseline_contexts = np.asarray(self.baseline_contexts, dtype=float)
        if self.baseline_contexts.ndim != 2:
            raise ValueError("baseline_contexts must be a 2-d sample matrix")
        self.baseline_contexts.flags.writeable = False
        self._validate_topology()

    def _validate_topology(self) -> None:
        state_set = set(self.states)
        if self.initial_state not in state_set or self.terminal_state not in state_set:
            raise ValueError("initial and terminal states must be listed in states")
        if set(self.transitions) != state_set - {self.terminal_state}:
            raise ValueError("every non-terminal state needs exactly one transition")
        # Every state must reach the terminal state (no livelock).
        for start in self.states:
            seen = set()
            state = start
            while state != self.terminal_state:
                if state in seen:
                    raise ValueError(f"cycle detected from state {start!r}")
                seen.add(state)
                _, state = self.transitions[state]

    @property
    def length(self) -> int:
        return len(self.states) - 1


def compile_policy(
    canonical: CanonicalTrace, contexts: Sequence[Sequence[float]] | np.ndarray
) -> HabitPolicy:
    """Compile a canonical trace into a deployed chain FSM.

    ``contexts`` is the compile-time context sample; it is stored on the
    policy as the drift baseline and must be non-empty.
    """
    ctx = np.asarray(contexts, dtype=float)
    if ctx.ndim == 1:
        if ctx.shape[0] == 0:
            raise ValueError("contexts must be non-empty")
        ctx = ctx.reshape(1, -1)
    elif ctx.ndim != 2 or ctx.shape[0] == 0:
        raise ValueError("contexts must be a non-empty sample of vectors")

    n = len(canonical.templates)
    states = tuple(f"s{i}" for i in range(n)) + ("done",)
    transitions = {
        f"s{i}": (tpl, states[i + 1]) for i, tpl in enumerate(canonical.templates)
    }
    return HabitPolicy(
        class_key=canonical.class_key,
        states=states,
        initial_state="s0",
        terminal_state="done",
        transitions=transitions,
        baseline_contexts=ctx,
    )


def step_policy(
    policy: HabitPolicy, state: str, context: Sequence[float]
) -> tuple[Action, str] | None:
    """One FSM step: instantiate the state's template, advance the chain.

    Returns None as the end-of-policy signal when ``state`` is terminal.
    Raises :class:`PolicyRevokedError` if the policy has been invalidated.
    """
    if policy.status is PolicyStatus.INVALIDATED:
        raise PolicyRevokedError(
            f"policy for class {policy.class_key!r} was invalidated by drift"
        )
    if state == policy.terminal_state:
        return None
    try:
        template, nxt = policy.transitions[state]
    except KeyError:
        raise ValueError(f"unknown state {state!r}") from None
    return template.instantiate(context), nxt


def replay_policy(policy: HabitPolicy, context: Sequence[float]) -> list[Action]:
    """Run the policy from its initial state to termination."""
    actions: list[Action] = []
    state = policy.initial_state
    while True:
        step = step_policy(policy, state, context)
        if step is None:
            return actions
        action, state = step
        actions.append(action)


class HabitRegistry:
    """Deployed-policy lookup keyed by task class.

    One writer (the compiler / drift monitor) and any number of readers;
    status transitions are atomic under the registry lock.
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._policies: dict[str, HabitPolicy] = {}

    def deploy(self, policy: HabitPolicy) -> None:
        with self._lock:
            self._policies[policy.class_key] = policy

    def lookup(self, class_key: str) -> HabitPolicy | None:
        with self._lock:
            return self._policies.get(class_key)

    def deployed(self, class_key: str) -> bool:
        with self._lock:
            policy = self._policies.get(class_key)
            return policy is not None and policy.status is PolicyStatus.DEPLOYED

    def invalidate(self, class_key: str) -> None:
        with self._lock:
            policy = self._policies.get(class_key)
            if policy is not None:
                policy.status = PolicyStatus.INVALIDATED

    def class_keys(self) -> list[str]:
        with self._lock:
            return sorted(self._policies)


# ---------------------------------------------------------------------------
# Serialisation: versioned, self-describing JSON text, suitable for transfer
# over the bus and for golden-file comparisons (keys are sorted, floats use
# repr precision).
# ---------------------------------------------------------------------------


def _template_to_dict(tpl: ActionTemplate) -> dict:
    return {
        "name": tpl.name,
        "literals": dict(tpl.literals),
        "slots": dict(tpl.slots),
    }


def policy_to_text(policy: HabitPolicy) -> str:
    doc = {
        "format": "trispirit-habit-policy",
        "version": POLICY_FORMAT_VERSION,
        "class_key": policy.class_key,
        "states": list(policy.states),
        "initial_state": policy.initial_state,
        "terminal_state": policy.terminal_state,
        "transitions": {
            state: {"template": _template_to_dict(tpl), "next": nxt}
            for state, (tpl, nxt) in sorted(policy.transitions.items())
        },
        "status": policy.status.value,
        "baseline_contexts": [list(row) for row in policy.baseline_contexts],
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def policy_from_text(text: str) -> HabitPolicy:
    doc = json.loads(text)
    if doc.get("format") != "trispirit-habit-policy":
        raise ValueError("not a habit policy document")
    if doc.get("version") != POLICY_FORMAT_VERSION:
        raise ValueError(f"unsupported policy format version {doc.get('version')!r}")
    transitions = {
        state: (
            ActionTemplate(
                name=entry["template"]["name"],
                literals=entry["template"]["literals"],
                slots={k: int(v) for k, v in entry["template"]["slots"].items()},
            ),
            entry["next"],
        )
        for state, entry in doc["transitions"].items()
    }
    return HabitPolicy(
        class_key=doc["class_key"],
        states=tuple(doc["states"]),
        initial_state=doc["initial_state"],
        terminal_state=doc["terminal_state"],
        transitions=transitions,
        baseline_contexts=np.asarray(doc["baseline_contexts"], dtype=float),
        status=PolicyStatus(doc["status"]),
    )
