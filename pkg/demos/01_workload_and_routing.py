"""Workload synthesis and threshold routing.

Generates the reference 2000-task workload, shows how the three task types
populate the urgency/complexity plane, and routes them with the default
thresholds. Lowering or raising the reflex thresholds moves the boundary
between instant FSM execution and on-device reasoning.
"""

from collections import Counter

from trispirit import (
    RngStreams,
    TaskType,
    Thresholds,
    route,
    route_with_habit,
    sample_tasks,
)
from trispirit.sim import habit_registry_for

streams = RngStreams()  # primary seed 42, bootstrap seed 99
tasks = sample_tasks(2000, rng=streams)

print("== workload ==")
by_kind = Counter(t.kind for t in tasks)
for kind in TaskType:
    subset = [t for t in tasks if t.kind is kind]
    l_vals = [t.l for t in subset]
    c_vals = [t.c for t in subset]
    print(
        f"type {kind.code}: n={by_kind[kind]:4d}  "
        f"l in [{min(l_vals):.3f}, {max(l_vals):.3f}]  "
        f"c in [{min(c_vals):.3f}, {max(c_vals):.3f}]"
    )

print("\n== default thresholds ==")
assignments = Counter(route(t) for t in tasks)
for layer, count in assignments.most_common():
    print(f"{layer.value:>6}: {count:4d}  ({100 * count / len(tasks):.1f}%)")

print("\n== tighter reflex box (tau_r=0.15) ==")
tight = Thresholds(tau_r=0.15)
for layer, count in Counter(route(t, tight) for t in tasks).most_common():
    print(f"{layer.value:>6}: {count:4d}  ({100 * count / len(tasks):.1f}%)")

print("\n== habit-aware routing (policies deployed for type C) ==")
registry = habit_registry_for([TaskType.REPEATED_C.name])
habitised = Counter(route_with_habit(t, registry) for t in tasks)
for layer, count in habitised.most_common():
    print(f"{layer.value:>6}: {count:4d}  ({100 * count / len(tasks):.1f}%)")

print("\nEvery repeated-pattern task now bypasses the reasoning tiers entirely.")
