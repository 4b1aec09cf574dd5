"""The full execution flow: route, gate, dispatch, execute, remember.

Each request is classified and routed, reflex-bound work clears the safety
gates, the task rides the bus to its tier, and the outcome feeds memory and
the habit statistics. With connectivity cut, cloud-bound work either fails
gracefully or degrades to the on-device tier.
"""

from trispirit import (
    GateConfig,
    RiskRule,
    RuntimeConfig,
    Task,
    TaskType,
    TriSpiritRuntime,
    Trigger,
)
from trispirit.habit import Action, ExecutionTrace

print("== routing three representative requests ==")
rt = TriSpiritRuntime()
for task in [
    Task(id=0, kind=TaskType.REACTIVE_A, l=0.05, c=0.10),
    Task(id=1, kind=TaskType.REASONING_B, l=0.50, c=0.60),
    Task(id=2, kind=TaskType.REASONING_B, l=0.90, c=0.95),
]:
    out = rt.handle_request(task)
    print(
        f"task {task.id} (l={task.l}, c={task.c}) -> {out.layer:>6}  "
        f"{out.latency_ms:7.1f} ms, {out.model_calls} model calls, "
        f"gate={out.gate_verdict}"
    )

trigger = Trigger("motion-detected", "lights-on", {"level": 3})
out = rt.handle_request(trigger)
print(f"trigger {trigger.action!r} -> {out.layer}: actions={list(out.actions)}")

print("\n== a risk rule rejects reflex execution ==")
guarded = TriSpiritRuntime(
    RuntimeConfig(
        gate_config=GateConfig(
            theta_r=0.5,
            rule_table=(RiskRule("urgent-and-blind", lambda f: f.get("l", 1) < 0.2, 0.8),),
        )
    )
)
out = guarded.handle_request(Task(id=9, kind=TaskType.REACTIVE_A, l=0.05, c=0.10))
print(f"gate said {out.gate_verdict} ({out.gate_code}); executed on {out.layer} instead")

print("\n== offline degradation ==")
offline = TriSpiritRuntime(RuntimeConfig(connectivity=False))
out = offline.handle_request(Task(id=3, kind=TaskType.REASONING_B, l=0.9, c=0.95))
print(f"super-routed with no network: success={out.success} (graceful failure)")
fallback = TriSpiritRuntime(RuntimeConfig(connectivity=False, super_fallback="agent"))
out = fallback.handle_request(Task(id=4, kind=TaskType.REASONING_B, l=0.9, c=0.95))
print(f"with agent fallback: success={out.success} on {out.layer}")

print("\n== habit promotion inside the runtime ==")
rt = TriSpiritRuntime()
for i in range(12):
    rt.trace_log.append(
        ExecutionTrace(
            "REPEATED_C",
            (Action("open", {"x": float(i % 3)}), Action("send")),
            context=(float(i % 3),),
        ),
        at=float(i),
    )
print(f"promoted classes: {rt.promote_habits()}")
out = rt.handle_request(
    Task(id=5, kind=TaskType.REPEATED_C, l=0.1, c=0.1), context=(2.0,)
)
print(f"repeated task now runs on {out.layer!r}: {list(out.actions)}")

print("\n== memory after the session ==")
print(
    f"working buffer {len(rt.memory.working)} entries "
    f"(capacity {rt.memory.kappa}), {len(rt.memory.episodes)} episodes, "
    f"{rt.bus.stats.published} bus messages"
)
