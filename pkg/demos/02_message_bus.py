"""The priority bus: ordering, TTL expiry and the reflex latency bound.

The bus delivers highest priority first with FIFO tie-breaking, drops
messages whose deadline passed before delivery, and tracks the worst
enqueue-to-delivery delay for reflex-origin traffic. Time here is a logical
clock the caller advances, so the whole exchange is deterministic.
"""

from trispirit import (
    Layer,
    MessageType,
    REFLEX_PRIORITY,
    SpiritBus,
    SpiritMessage,
)

bus = SpiritBus(record_trace=True)

print("== priority ordering with an expiring message ==")
for label, priority, ttl in [("low", 1, 100.0), ("urgent", 9, 2.0), ("mid", 5, 100.0)]:
    msg = SpiritMessage(
        src=Layer.AGENT,
        dst=Layer.REFLEX,
        mtype=MessageType.TASK,
        payload=label.encode(),
        priority=priority,
        ttl=ttl,
    )
    bus.publish(msg, now=0.0)
    print(f"published {label!r} at priority {priority}, deadline t={ttl}")

print("\npolling at t=5 (the urgent message has already expired):")
while (msg := bus.poll_next(Layer.REFLEX, now=5.0)) is not None:
    print(f"  delivered {msg.payload.decode()!r} (priority {msg.priority})")
print(f"stats: {bus.stats.delivered} delivered, {bus.stats.expired} expired")

print("\n== reflex traffic owns the top band ==")
bus.publish(
    SpiritMessage(
        src=Layer.SUPER,
        dst=Layer.AGENT,
        mtype=MessageType.GOAL,
        priority=50,
        ttl=1e6,
    ),
    now=10.0,
)
bus.publish(
    SpiritMessage(
        src=Layer.REFLEX,
        dst=Layer.AGENT,
        mtype=MessageType.EVENT,
        priority=REFLEX_PRIORITY,
        ttl=1e6,
    ),
    now=11.0,
)
first = bus.poll_next(Layer.AGENT, now=12.0)
print(f"first delivery from {first.src.value} (published later, higher band)")
bus.poll_next(Layer.AGENT, now=13.0)
print(f"worst reflex enqueue-to-delivery delay so far: {bus.reflex_delivery_bound()}")

print("\n== event log ==")
for line in bus.trace_lines:
    print(" ", line)
