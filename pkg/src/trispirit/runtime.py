"""Three-layer runtime: execution flow, memory model and safety gates.

The runtime wires the routing policy, the habit registry and the message
bus into one request path: classify, route (habit-aware), dispatch over the
bus, execute on the assigned tier, then feed the outcome back into memory
and the habit trace log. Layer "reasoning" is backed by pluggable executors;
the default executors draw service times and energy from the simulation
cost model, so no real model inference happens anywhere.

Safety gating guards execution on the reflex tier: a candidate plan must
clear the confidence floor, the risk ceiling and the deterministic verify
check before it may run there. Low confidence escalates to the planning
tier for review; dangerous or invalid plans are rejected back to the agent
tier.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

from .bus import REFLEX_PRIORITY, Layer, MessageType, SpiritBus, SpiritMessage
from .habit import (
    AbstractionError,
    Action,
    ExecutionTrace,
    HabitPolicy,
    HabitRegistry,
    HabitWeights,
    TraceLog,
    abstract_traces,
    compile_policy,
    detect_candidates,
    drift_check,
    policy_from_text,
    policy_to_text,
    replay_policy,
)
from .routing import LayerAssignment, Thresholds, quality_penalty, route, route_with_habit
from .workload import ConfigurationError, Task

__all__ = [
    "Trigger",
    "LayerInterface",
    "InterfaceViolation",
    "Outcome",
    "Feedback",
    "EpisodeSummary",
    "MemoryState",
    "memory_update",
    "GateVerdict",
    "GateDecision",
    "CandidatePolicy",
    "RiskRule",
    "VerifyRule",
    "GateConfig",
    "safety_gate",
    "reflex_queue_process",
    "ExecutionResult",
    "RuntimeConfig",
    "TriSpiritRuntime",
    "write_outcomes",
    "read_outcomes",
]


@dataclass(frozen=True)
class Trigger:
    """Atomic reflex-tier work item."""

    trigger_condition: str
    action: str
    parameters: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.action:
            raise ValueError("trigger action must be non-empty")


class InterfaceViolation(Exception):
    pass


@dataclass(frozen=True)
class LayerInterface:
    """Typed surface of one layer: accepted goals, emitted commands,
    monitoring probes and the error-code surface. Members are opaque
    identifiers; only membership is validated."""

    goals: frozenset[str] = frozenset()
    commands: frozenset[str] = frozenset()
    probes: frozenset[str] = frozenset()
    exceptions: frozenset[str] = frozenset()

    def check_command(self, command: str) -> None:
        if command not in self.commands:
            raise InterfaceViolation(f"command {command!r} not in interface")

    def check_exception(self, code: str) -> None:
        if code not in self.exceptions:
            raise InterfaceViolation(f"error code {code!r} not in interface")

    def accepts_goal(self, goal: str) -> bool:
        return goal in self.goals


# ---------------------------------------------------------------------------
# Outcome records and the memory model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Outcome:
    """Result of handling one request."""

    task_id: int
    layer: str
    latency_ms: float
    energy_mj: float
    model_calls: int
    actions: tuple[Action, ...] = ()
    gate_verdict: str | None = None
    gate_code: str | None = None
    success: bool = True
    offline_ok: bool = True
    quality_penalty: float = 0.0
    importance: float = 1.0


@dataclass(frozen=True)
class Feedback:
    """Post-execution feedback; may carry a revised-intent signal."""

    revised_goal: str | None = None


@dataclass(frozen=True)
class EpisodeSummary:
    digest: str
    weight: float

    def __post_init__(self) -> None:
        if self.weight < 0:
            raise ValueError("episode importance weight must be >= 0")


@dataclass
class MemoryState:
    """Working buffer, weighted episodic store and goal stack."""

    kappa: int = 32
    working: list[Outcome] = field(default_factory=list)
    episodes: list[EpisodeSummary] = field(default_factory=list)
    goals: list[str] = field(default_factory=list)
    consolidations: int = 0


def memory_update(
    memory: MemoryState, outcome: Outcome, feedback: Feedback | None = None
) -> MemoryState:
    """Apply one memory-update step in place and return the state.

    The outcome is appended to the working buffer; once the buffer exceeds
    its capacity it is consolidated into a single episodic entry whose
    weight is the mean outcome importance, and cleared. A revised-intent
    signal in the feedback replaces the top of the goal stack.
    """
    memory.working.append(outcome)
    if len(memory.working) > memory.kappa:
        weight = sum(o.importance for o in memory.working) / len(memory.working)
        digest = "|".join(
            f"{o.task_id}:{o.layer}:{'ok' if o.success else 'fail'}"
            for o in memory.working
        )
        memory.episodes.append(EpisodeSummary(digest=digest, weight=weight))
        memory.working.clear()
        memory.consolidations += 1
    if feedback is not None and feedback.revised_goal is not None:
        if memory.goals:
            memory.goals[-1] = feedback.revised_goal
        else:
            memory.goals.append(feedback.revised_goal)
    return memory


# ---------------------------------------------------------------------------
# Safety gates
# ---------------------------------------------------------------------------


class GateVerdict(enum.Enum):
    PASS = "pass"
    ESCALATE = "escalate"
    REJECT = "reject"


@dataclass(frozen=True)
class GateDecision:
    verdict: GateVerdict
    code: str | None = None
    confidence: float = 0.0
    risk: float = 0.0


@dataclass(frozen=True)
class CandidatePolicy:
    """A plan proposed for reflex-tier execution."""

    body: object  # sequence of actions or a HabitPolicy
    confidence: float
    risk_features: Mapping[str, object] = field(default_factory=dict)
    origin: Layer = Layer.AGENT

    def __post_init__(self) -> None:
        if not (0.0 <= self.confidence <= 1.0):
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")

    def elements(self) -> list[object]:
        if isinstance(self.body, HabitPolicy):
            order = []
            state = self.body.initial_state
            while state != self.body.terminal_state:
                template, state = self.body.transitions[state]
                order.append(template)
            return order
        return list(self.body)


@dataclass(frozen=True)
class RiskRule:
    """Adds ``contribution`` to the risk score when the predicate matches."""

    name: str
    predicate: Callable[[Mapping[str, object]], bool]
    contribution: float


@dataclass(frozen=True)
class VerifyRule:
    """Deterministic per-element predicate; all elements must satisfy it."""

    name: str
    predicate: Callable[[object], bool]


@dataclass(frozen=True)
class GateConfig:
    theta_c: float = 0.5
    theta_r: float = 0.5
    rule_table: tuple[RiskRule, ...] = ()
    verify_rules: tuple[VerifyRule, ...] = ()

    def __post_init__(self) -> None:
        for name in ("theta_c", "theta_r"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ConfigurationError(f"{name}={v} outside [0, 1]")


def _validate_rule_table(rule_table: Iterable[RiskRule]) -> None:
    for rule in rule_table:
        if not isinstance(rule, RiskRule) or not callable(rule.predicate):
            raise ConfigurationError(f"malformed risk rule: {rule!r}")
        if not math.isfinite(rule.contribution) or rule.contribution < 0:
            raise ConfigurationError(
                f"risk rule {rule.name!r} has invalid contribution {rule.contribution!r}"
            )


def safety_gate(candidate: CandidatePolicy, cfg: GateConfig) -> GateDecision:
    """Evaluate the three gates in order: confidence, risk, verify.

    Confidence must strictly exceed the floor and risk must stay strictly
    below the ceiling; equality fails the gate. A confidence failure asks
    the planning tier for review (ESCALATE), while a risk or verify failure
    rejects the candidate outright with the failed gate named in the code.
    """
    _validate_rule_table(cfg.rule_table)

    risk = 0.0
    for rule in cfg.rule_table:
        if rule.predicate(candidate.risk_features):
            risk += rule.contribution
    risk = min(1.0, max(0.0, risk))

    if not candidate.confidence > cfg.theta_c:
        return GateDecision(
            GateVerdict.ESCALATE, "confidence", candidate.confidence, risk
        )
    if not risk < cfg.theta_r:
        return GateDecision(GateVerdict.REJECT, "risk", candidate.confidence, risk)
    # Single pass over the policy body; each element is touched once per rule.
    for element in candidate.elements():
        for rule in cfg.verify_rules:
            if not rule.predicate(element):
                return GateDecision(
                    GateVerdict.REJECT, "verify", candidate.confidence, risk
                )
    return GateDecision(GateVerdict.PASS, None, candidate.confidence, risk)


def reflex_queue_process(
    pending: Sequence[tuple[object, float]],
) -> list[tuple[object, float]]:
    """Order pending (action, deadline) pairs by deadline, ties by insertion."""
    for _, deadline in pending:
        if not math.isfinite(deadline):
            raise ValueError(f"deadline must be finite, got {deadline!r}")
    return sorted(pending, key=lambda item: item[1])


# ---------------------------------------------------------------------------
# The runtime
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExecutionResult:
    latency_ms: float
    energy_mj: float
    model_calls: int
    actions: tuple[Action, ...] = ()


Executor = Callable[[object], ExecutionResult]

_DST_LAYER = {
    LayerAssignment.REFLEX: Layer.REFLEX,
    LayerAssignment.HABIT: Layer.REFLEX,  # habit policies run on the reflex tier
    LayerAssignment.AGENT: Layer.AGENT,
    LayerAssignment.SUPER: Layer.SUPER,
}

#: Message priority bands. Reflex traffic owns the top band so it can never
#: be queued behind agent or super traffic.
PRIORITY_BANDS = {Layer.REFLEX: REFLEX_PRIORITY, Layer.AGENT: 50, Layer.SUPER: 10}


@dataclass
class RuntimeConfig:
    thresholds: Thresholds = Thresholds()
    habit_weights: HabitWeights = HabitWeights()
    gate_config: GateConfig = GateConfig()
    kappa: int = 32
    window_size: int = 500
    habit_enabled: bool = True
    connectivity: bool = True
    super_fallback: str = "fail"  # "fail" or "agent"
    candidate_confidence: float = 1.0
    compile_sample: int = 5
    drift_threshold: float = 0.05
    message_ttl: float = 1e9

    def __post_init__(self) -> None:
        if self.super_fallback not in ("fail", "agent"):
            raise ConfigurationError(
                f"super_fallback must be 'fail' or 'agent', got {self.super_fallback!r}"
            )


class TriSpiritRuntime:
    """Deterministic single-process runtime.

    Layers are modelled as bus endpoints polled inline, which makes the
    execution flow reproducible; the bus itself is thread-safe, so the same
    wiring admits one actor thread per layer.
    """

    def __init__(
        self,
        config: RuntimeConfig | None = None,
        executors: Mapping[str, Executor] | None = None,
        bus: SpiritBus | None = None,
        registry: HabitRegistry | None = None,
        interfaces: Mapping[Layer, LayerInterface] | None = None,
    ) -> None:
        self.config = config or RuntimeConfig()
        self.bus = bus or SpiritBus()
        self.registry = registry or HabitRegistry()
        self.memory = MemoryState(kappa=self.config.kappa)
        self.trace_log = TraceLog(maxlen=self.config.window_size)
        self.interfaces = dict(interfaces) if interfaces else {}
        self.clock = 0.0
        self.outcomes: list[Outcome] = []
        if executors is None:
            executors = default_executors()
        self.executors = dict(executors)
        missing = {"reflex", "agent", "super", "habit"} - set(self.executors)
        if missing:
            raise ConfigurationError(f"missing executors for paths: {sorted(missing)}")

    def _tick(self) -> float:
        self.clock += 1.0
        return self.clock

    # -- dispatch helpers ---------------------------------------------------

    def _send(self, src: Layer, dst: Layer, mtype: MessageType, payload: bytes) -> SpiritMessage:
        msg = SpiritMessage(
            src=src,
            dst=dst,
            mtype=mtype,
            payload=payload,
            priority=PRIORITY_BANDS[src],
            ttl=self.clock + self.config.message_ttl,
        )
        self.bus.publish(msg, self._tick())
        delivered = self.bus.poll_next(dst, self._tick())
        assert delivered is not None
        return delivered

    def _gate_candidate(self, request: object, assignment: LayerAssignment) -> CandidatePolicy:
        if assignment is LayerAssignment.HABIT and isinstance(request, Task):
            policy = self.registry.lookup(self._class_key(request))
            body: object = policy if policy is not None else ()
        elif isinstance(request, Trigger):
            body = (Action(request.action, request.parameters),)
        else:
            body = (Action("reflex-exec", {"task_id": getattr(request, "id", None)}),)
        features: dict[str, object] = {}
        if isinstance(request, Task):
            features = {"l": request.l, "c": request.c, "kind": request.kind.code}
        elif isinstance(request, Trigger):
            features = {"action": request.action, **dict(request.parameters)}
        return CandidatePolicy(
            body=body,
            confidence=self.config.candidate_confidence,
            risk_features=features,
            origin=Layer.AGENT,
        )

    @staticmethod
    def _class_key(request: object) -> str:
        if isinstance(request, Task):
            return request.class_key
        if isinstance(request, Trigger):
            return request.action
        raise TypeError(f"unsupported request type {type(request)!r}")

    # -- the request path ---------------------------------------------------

    def handle_request(
        self,
        request: Task | Trigger,
        context: Sequence[float] = (),
        feedback: Feedback | None = None,
    ) -> Outcome:
        """Run the full execution flow for one request.

        Triggers are reflex-tier work items and skip threshold routing.
        Tasks are routed habit-aware when enabled. Reflex-bound work (plain
        or habit) must clear the safety gates first: an escalated candidate
        is reviewed by the super tier, a rejected one stays on the agent
        tier. When the super tier is unreachable the request either degrades
        to the agent tier or fails offline, per configuration.
        """
        if isinstance(request, Trigger):
            assignment = LayerAssignment.REFLEX
        elif self.config.habit_enabled:
            assignment = route_with_habit(request, self.registry, self.config.thresholds)
        else:
            assignment = route(request, self.config.thresholds)

        gate: GateDecision | None = None
        if assignment in (LayerAssignment.REFLEX, LayerAssignment.HABIT):
            candidate = self._gate_candidate(request, assignment)
            gate = safety_gate(candidate, self.config.gate_config)
            if gate.verdict is GateVerdict.ESCALATE:
                assignment = LayerAssignment.SUPER
            elif gate.verdict is GateVerdict.REJECT:
                assignment = LayerAssignment.AGENT

        degraded = False
        if assignment is LayerAssignment.SUPER and not self.config.connectivity:
            if self.config.super_fallback == "agent":
                assignment = LayerAssignment.AGENT
                degraded = True
            else:
                outcome = self._offline_failure(request, gate)
                self._absorb(outcome, request, context, feedback)
                return outcome

        dst = _DST_LAYER[assignment]
        self._send(Layer.AGENT, dst, MessageType.TASK, self._payload(request))

        if assignment is LayerAssignment.HABIT:
            result = self._execute_habit(request, context)
        else:
            result = self.executors[assignment.value](request)

        iface = self.interfaces.get(dst)
        if iface is not None:
            for action in result.actions:
                iface.check_command(action.name)

        # Completion event back to the agent tier for logging and habit stats.
        self._send(dst, Layer.AGENT, MessageType.EVENT, b"")

        kind = request.kind if isinstance(request, Task) else None
        outcome = Outcome(
            task_id=getattr(request, "id", -1),
            layer=assignment.value,
            latency_ms=result.latency_ms,
            energy_mj=result.energy_mj,
            model_calls=result.model_calls,
            actions=result.actions,
            gate_verdict=gate.verdict.value if gate else None,
            gate_code=gate.code if gate else None,
            success=True,
            offline_ok=assignment is not LayerAssignment.SUPER,
            quality_penalty=quality_penalty(kind, assignment.value) if kind else 0.0,
            importance=1.0 if not degraded else 0.5,
        )
        self._absorb(outcome, request, context, feedback)
        return outcome

    def _payload(self, request: object) -> bytes:
        if isinstance(request, Task):
            return f"task:{request.id}".encode()
        return f"trigger:{self._class_key(request)}".encode()

    def _offline_failure(self, request: object, gate: GateDecision | None) -> Outcome:
        return Outcome(
            task_id=getattr(request, "id", -1),
            layer=LayerAssignment.SUPER.value,
            latency_ms=0.0,
            energy_mj=0.0,
            model_calls=0,
            actions=(),
            gate_verdict=gate.verdict.value if gate else None,
            gate_code=gate.code if gate else None,
            success=False,
            offline_ok=False,
            quality_penalty=0.0,
        )

    def _execute_habit(self, request: object, context: Sequence[float]) -> ExecutionResult:
        policy = self.registry.lookup(self._class_key(request))
        assert policy is not None  # routing guaranteed a deployed policy
        actions = tuple(replay_policy(policy, context))
        cost = self.executors["habit"](request)
        return ExecutionResult(
            latency_ms=cost.latency_ms,
            energy_mj=cost.energy_mj,
            model_calls=0,
            actions=actions,
        )

    def _absorb(
        self,
        outcome: Outcome,
        request: object,
        context: Sequence[float],
        feedback: Feedback | None,
    ) -> None:
        self.outcomes.append(outcome)
        memory_update(self.memory, outcome, feedback)
        if outcome.success:
            actions = outcome.actions or (Action("noop"),)
            self.trace_log.append(
                ExecutionTrace(
                    class_key=self._class_key(request),
                    actions=actions,
                    context=tuple(context),
                ),
                at=self.clock,
            )

    # -- habit lifecycle ----------------------------------------------------

    def promote_habits(self) -> list[str]:
        """Detect, abstract, compile, gate and deploy habit candidates.

        Compiled policies ride the bus to the reflex tier as serialised
        HABIT messages; the deployed policy is the deserialised copy.
        Returns the newly deployed class keys.
        """
        newly: list[str] = []
        for class_key, _score in detect_candidates(self.trace_log, self.config.habit_weights):
            if self.registry.deployed(class_key):
                continue
            traces = self.trace_log.recent(class_key, self.config.compile_sample)
            if len(traces) < 2:
                continue
            try:
                canonical = abstract_traces(traces)
            except AbstractionError:
                continue
            policy = compile_policy(canonical, [t.context for t in traces])
            decision = safety_gate(
                CandidatePolicy(
                    body=policy,
                    confidence=self.config.candidate_confidence,
                    origin=Layer.AGENT,
                ),
                self.config.gate_config,
            )
            if decision.verdict is not GateVerdict.PASS:
                continue
            delivered = self._send(
                Layer.AGENT,
                Layer.REFLEX,
                MessageType.HABIT,
                policy_to_text(policy).encode(),
            )
            self.registry.deploy(policy_from_text(delivered.payload.decode()))
            newly.append(class_key)
        return newly

    def check_drift(self, class_key: str, recent, threshold: float | None = None):
        """Drift-check a deployed policy; a DRIFTED verdict invalidates it,
        which reverts routing for the class to the threshold policy."""
        policy = self.registry.lookup(class_key)
        if policy is None:
            raise KeyError(f"no policy deployed for class {class_key!r}")
        t = self.config.drift_threshold if threshold is None else threshold
        return drift_check(policy, recent, t)


def default_executors() -> dict[str, Executor]:
    """Cost-model-backed executors with zero noise (deterministic means)."""
    from .sim.costs import CostModel

    return cost_model_executors(CostModel())


def cost_model_executors(model, noise=None) -> dict[str, Executor]:
    """Build executors that charge the given cost model's means.

    ``noise`` may map a request to a (latency_z, energy_z) pair; by default
    costs are the distribution means. Reflex executions emit one concrete
    action so that gate soundness and interface membership are observable.
    """

    def make(path: str, calls: int, actions_for) -> Executor:
        def execute(request: object) -> ExecutionResult:
            z_lat, z_en = (0.0, 0.0) if noise is None else noise(request)
            pc = model.paths[path]
            return ExecutionResult(
                latency_ms=max(0.0, pc.latency_mean + pc.latency_sd * z_lat),
                energy_mj=max(0.0, pc.energy_mean + pc.energy_sd * z_en),
                model_calls=calls,
                actions=actions_for(request),
            )

        return execute

    def reflex_actions(request: object) -> tuple[Action, ...]:
        if isinstance(request, Trigger):
            return (Action(request.action, request.parameters),)
        return (Action("reflex-exec", {"task_id": getattr(request, "id", None)}),)

    no_actions = lambda request: ()
    return {
        "reflex": make("reflex", 0, reflex_actions),
        "agent": make("agent", 1, no_actions),
        "super": make("super", 2, no_actions),
        "habit": make("habit", 0, no_actions),
    }


# ---------------------------------------------------------------------------
# Outcome record text format: JSON lines, one outcome per line.
# ---------------------------------------------------------------------------


def _outcome_to_dict(o: Outcome) -> dict:
    return {
        "task_id": o.task_id,
        "layer": o.layer,
        "latency_ms": o.latency_ms,
        "energy_mj": o.energy_mj,
        "model_calls": o.model_calls,
        "actions": [
            {"name": a.name, "params": dict(a.params)} for a in o.actions
        ],
        "gate_verdict": o.gate_verdict,
        "gate_code": o.gate_code,
        "success": o.success,
        "offline_ok": o.offline_ok,
        "quality_penalty": o.quality_penalty,
        "importance": o.importance,
    }


def write_outcomes(outcomes: Iterable[Outcome], path: str | Path) -> None:
    lines = [json.dumps(_outcome_to_dict(o), sort_keys=True) for o in outcomes]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_outcomes(path: str | Path) -> list[Outcome]:
    outcomes = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        d = json.loads(line)
        outcomes.append(
            Outcome(
                task_id=d["task_id"],
                layer=d["layer"],
                latency_ms=d["latency_ms"],
                energy_mj=d["energy_mj"],
                model_calls=d["model_calls"],
                actions=tuple(
                    Action(a["name"], a["params"]) for a in d["actions"]
                ),
                gate_verdict=d["gate_verdict"],
                gate_code=d["gate_code"],
                success=d["success"],
                offline_ok=d["offline_ok"],
                quality_penalty=d["quality_penalty"],
                importance=d["importance"],
            )
        )
    return outcomes
