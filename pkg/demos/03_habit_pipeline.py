"""The habit pipeline end to end.

A task class that recurs often, regularly and in similar contexts is
detected, its recent traces are aligned and abstracted into parameterised
templates, the templates compile into a chain FSM that executes with zero
reasoning-model calls, and the deployed policy is torn down again the
moment its context distribution drifts.
"""

import numpy as np

from trispirit.habit import (
    Action,
    ExecutionTrace,
    TraceLog,
    abstract_traces,
    compile_policy,
    detect_candidates,
    drift_check,
    policy_to_text,
    replay_policy,
)

rng = np.random.default_rng(2024)

print("== 1. detection ==")
log = TraceLog(maxlen=500)
for i in range(40):
    brightness = float(rng.integers(40, 60))
    trace = ExecutionTrace(
        class_key="evening-lights",
        actions=(
            Action("dim", {"level": brightness}),
            Action("notify", {"channel": "home"}),
        ),
        context=(brightness,),
    )
    log.append(trace, at=float(i))  # one invocation per tick, metronome-regular

flagged = detect_candidates(log)
for class_key, score in flagged:
    print(f"candidate {class_key!r} with score {score:.3f} (> 0.75 promotes)")

print("\n== 2. abstraction ==")
recent = log.recent("evening-lights", 8)
canonical = abstract_traces(recent)
for template in canonical.templates:
    print(
        f"template {template.name}: literals={dict(template.literals)} "
        f"slots={dict(template.slots)}"
    )

print("\n== 3. compilation and replay ==")
policy = compile_policy(canonical, [t.context for t in recent])
print(f"chain FSM with states {policy.states}")
for level in (42.0, 55.0):
    actions = replay_policy(policy, context=(level,))
    print(f"context ({level},) replays as: {actions}")
print(f"\nserialised policy is {len(policy_to_text(policy))} bytes of JSON text")

print("\n== 4. drift monitoring ==")
same = np.array([[float(rng.integers(40, 60))] for _ in range(50)])
print(f"same distribution: {drift_check(policy, same).value}")
shifted = np.array([[float(rng.integers(400, 460))] for _ in range(50)])
print(f"shifted contexts:  {drift_check(policy, shifted).value}")
print(f"policy status is now {policy.status.value!r}; execution is refused and")
print("routing reverts to the threshold policy until a fresh compile.")
