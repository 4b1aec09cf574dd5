"""Priority-ordered, TTL-bounded inter-layer message bus.

Delivery order is highest priority first with FIFO tie-breaking on publish
order, so a message can never be overtaken by a later message of equal
priority. Messages whose deadline has passed are dropped at poll time and
counted, never delivered. Time is an explicit logical clock passed into
every operation, which keeps tests and the simulator fully deterministic.

Bounded latency for reflex traffic is realised by convention: reflex-origin
messages are published in the top priority band (see
:data:`REFLEX_PRIORITY`), and the bus reports the worst observed
enqueue-to-delivery delay for them.
"""

from __future__ import annotations

import enum
import heapq
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

__all__ = [
    "Layer",
    "MessageType",
    "SpiritMessage",
    "BusStats",
    "SpiritBus",
    "BusError",
    "ExpiredAtPublishError",
    "DuplicateIdError",
    "REFLEX_PRIORITY",
]


class Layer(enum.Enum):
    """Layer identifiers used as bus addresses."""

    SUPER = "super"
    AGENT = "agent"
    REFLEX = "reflex"


class MessageType(enum.Enum):
    GOAL = "goal"
    TASK = "task"
    EVENT = "event"
    HABIT = "habit"


#: Priority band reserved for reflex-origin traffic. Publishers keep ordinary
#: messages strictly below this value so reflex events are never queued
#: behind them.
REFLEX_PRIORITY = 100


@dataclass(frozen=True)
class SpiritMessage:
    src: Layer
    dst: Layer
    mtype: MessageType
    payload: bytes = b""
    priority: int = 0
    ttl: float = float("inf")
    id: uuid.UUID = field(default_factory=uuid.uuid4)

    def __post_init__(self) -> None:
        if self.priority < 0:
            raise ValueError(f"priority must be >= 0, got {self.priority}")


@dataclass
class BusStats:
    published: int = 0
    delivered: int = 0
    expired: int = 0
    max_reflex_delivery_delay: float | None = None

    @property
    def pending(self) -> int:
        return self.published - self.delivered - self.expired


class BusError(Exception):
    """Base class for publish rejections."""


class ExpiredAtPublishError(BusError):
    pass


class DuplicateIdError(BusError):
    pass


@dataclass(order=True)
class _Entry:
    sort_key: tuple[int, int]
    msg: SpiritMessage = field(compare=False)
    published_at: float = field(compare=False)


class SpiritBus:
    """In-process broker with one queue per destination layer.

    Safe for concurrent publishers and one poller per destination; all
    operations take the bus lock, so they are linearisable. The simulator
    uses it single-threaded.
    """

    def __init__(self, record_trace: bool = False) -> None:
        self._lock = threading.Lock()
        self._queues: dict[Layer, list[_Entry]] = {layer: [] for layer in Layer}
        self._seen_ids: set[uuid.UUID] = set()
        self._seq = 0
        self.stats = BusStats()
        self.trace_lines: list[str] | None = [] if record_trace else None

    def _trace(self, event: str, msg: SpiritMessage, now: float) -> None:
        if self.trace_lines is not None:
            self.trace_lines.append(
                f"{event}\tt={now!r}\tid={msg.id}\tsrc={msg.src.value}"
                f"\tdst={msg.dst.value}\ttype={msg.mtype.value}"
                f"\tprio={msg.priority}\tttl={msg.ttl!r}"
            )

    def save_trace(self, path: str | Path) -> None:
        """Write the event log, one line per publish/deliver/expire event."""
        if self.trace_lines is None:
            raise ValueError("bus was created without record_trace=True")
        Path(path).write_text("\n".join(self.trace_lines) + "\n", encoding="utf-8")

    def publish(self, msg: SpiritMessage, now: float) -> None:
        """Enqueue ``msg`` for its destination.

        Raises :class:`ExpiredAtPublishError` unless ``ttl`` is strictly in
        the future, and :class:`DuplicateIdError` if the id was ever seen on
        this bus.
        """
        with self._lock:
            if msg.ttl <= now:
                raise ExpiredAtPublishError(
                    f"message {msg.id} ttl={msg.ttl!r} not after now={now!r}"
                )
            if msg.id in self._seen_ids:
                raise DuplicateIdError(f"message id {msg.id} already published")
            self._seen_ids.add(msg.id)
            entry = _Entry(sort_key=(-msg.priority, self._seq), msg=msg, published_at=now)
            self._seq += 1
            heapq.heappush(self._queues[msg.dst], entry)
            self.stats.published += 1
            self._trace("PUBLISH", msg, now)

    def poll_next(self, dst: Layer, now: float) -> SpiritMessage | None:
        """Pop the highest-priority pending message for ``dst``.

        Messages past their deadline are skipped, counted as expired and
        never delivered. Returns None when the queue is drained.
        """
        with self._lock:
            queue = self._queues[dst]
            while queue:
                entry = heapq.heappop(queue)
                if entry.msg.ttl < now:
                    self.stats.expired += 1
                    self._trace("EXPIRE", entry.msg, now)
                    continue
                self.stats.delivered += 1
                if entry.msg.src is Layer.REFLEX:
                    delay = now - entry.published_at
                    best = self.stats.max_reflex_delivery_delay
                    if best is None or delay > best:
                        self.stats.max_reflex_delivery_delay = delay
                self._trace("DELIVER", entry.msg, now)
                return entry.msg
            return None

    def reflex_delivery_bound(self) -> float | None:
        """Worst observed enqueue-to-delivery delay for reflex-origin messages.

        None until at least one reflex-origin message has been delivered.
        """
        with self._lock:
            return self.stats.max_reflex_delivery_delay

    def pending_count(self, dst: Layer | None = None) -> int:
        with self._lock:
            if dst is not None:
                return len(self._queues[dst])
            return sum(len(q) for q in self._queues.values())
