"""In-process message broker with at-least-once delivery.

:class:`InMemoryQueue` stands in for the external broker; the producer and
consumer adapters are thin views over one shared queue.

Per topic, each key owns a heap of pending envelopes ordered by publish
sequence. A key with an envelope in flight is blocked, which yields per-key
FIFO: the next envelope of that key is handed out only after the previous
one is acked, or comes back (by nack or visibility timeout) ahead of it.
"""

from __future__ import annotations

import heapq
import threading
import time
from dataclasses import dataclass, field

from seawatch.adapters.clock import SystemClock
from seawatch.ports import BrokerConsumer, BrokerProducer, Clock, MessageEnvelope, UnknownDelivery

DEFAULT_VISIBILITY_TIMEOUT_MS = 5000


@dataclass
class _Topic:
    pending: dict[str, list[tuple[int, MessageEnvelope]]] = field(default_factory=dict)
    # (head seq, key) for every unblocked key with pending envelopes; may hold stale entries
    ready: list[tuple[int, str]] = field(default_factory=list)
    busy: set[str] = field(default_factory=set)


@dataclass
class _InFlight:
    topic: str
    seq: int
    envelope: MessageEnvelope
    deadline_ms: int


class InMemoryQueue:
    def __init__(
        self,
        visibility_timeout_ms: int = DEFAULT_VISIBILITY_TIMEOUT_MS,
        clock: Clock | None = None,
    ) -> None:
        if visibility_timeout_ms <= 0:
            raise ValueError("visibility timeout must be positive")
        self.visibility_timeout_ms = visibility_timeout_ms
        self.clock = clock or SystemClock()
        self._topics: dict[str, _Topic] = {}
        self._inflight: dict[str, _InFlight] = {}
        self._seq = 0
        self._cond = threading.Condition()

    # internal helpers expect self._cond to be held

    def _topic(self, name: str) -> _Topic:
        return self._topics.setdefault(name, _Topic())

    def _enqueue(self, topic: str, seq: int, envelope: MessageEnvelope) -> None:
        t = self._topic(topic)
        heap = t.pending.setdefault(envelope.key, [])
        heapq.heappush(heap, (seq, envelope))
        if envelope.key not in t.busy:
            heapq.heappush(t.ready, (heap[0][0], envelope.key))

    def _release(self, flight: _InFlight, requeue: bool) -> None:
        t = self._topic(flight.topic)
        key = flight.envelope.key
        t.busy.discard(key)
        if requeue:
            self._enqueue(flight.topic, flight.seq, flight.envelope)
        elif t.pending.get(key):
            heapq.heappush(t.ready, (t.pending[key][0][0], key))
        self._cond.notify_all()

    def _expire(self) -> None:
        now = self.clock.now_ms()
        for env_id in [i for i, f in self._inflight.items() if f.deadline_ms <= now]:
            self._release(self._inflight.pop(env_id), requeue=True)

    def _take(self, topic: str) -> MessageEnvelope | None:
        t = self._topics.get(topic)
        if t is None:
            return None
        while t.ready:
            seq, key = heapq.heappop(t.ready)
            heap = t.pending.get(key)
            if key in t.busy or not heap or heap[0][0] != seq:
                continue
            _, envelope = heapq.heappop(heap)
            if not heap:
                del t.pending[key]
            t.busy.add(key)
            self._inflight[envelope.id] = _InFlight(
                topic, seq, envelope, self.clock.now_ms() + self.visibility_timeout_ms
            )
            return envelope
        return None

    def publish(self, envelope: MessageEnvelope) -> None:
        with self._cond:
            self._seq += 1
            self._enqueue(envelope.topic, self._seq, envelope)
            self._cond.notify_all()

    def consume(self, topic: str, max_wait_ms: int = 0) -> MessageEnvelope | None:
        deadline = time.monotonic() + max(0, max_wait_ms) / 1000
        with self._cond:
            while True:
                self._expire()
                envelope = self._take(topic)
                if envelope is not None:
                    return envelope
                remaining = deadline - time.monotonic()
                if remaining <= 0:
                    return None
                # wake periodically: redeliveries are driven by the injected clock
                self._cond.wait(min(remaining, 0.05))

    def settle(self, envelope_id: str, requeue: bool) -> None:
        with self._cond:
            self._expire()
            flight = self._inflight.pop(envelope_id, None)
            if flight is None:
                raise UnknownDelivery(f"no delivery in flight with id {envelope_id!r}")
            self._release(flight, requeue)

    def depth(self, topic: str) -> tuple[int, int]:
        """(pending, in flight) envelope counts for ``topic``."""
        with self._cond:
            self._expire()
            t = self._topics.get(topic)
            pending = sum(len(h) for h in t.pending.values()) if t else 0
            inflight = sum(1 for f in self._inflight.values() if f.topic == topic)
            return pending, inflight


class MemoryBrokerProducer(BrokerProducer):
    def __init__(self, queue: InMemoryQueue) -> None:
        self.queue = queue

    def publish(self, envelope: MessageEnvelope) -> None:
        self.queue.publish(envelope)


class MemoryBrokerConsumer(BrokerConsumer):
    def __init__(self, queue: InMemoryQueue) -> None:
        self.queue = queue

    def consume(self, topic: str, max_wait_ms: int = 0) -> MessageEnvelope | None:
        return self.queue.consume(topic, max_wait_ms)

    def ack(self, envelope_id: str) -> None:
        self.queue.settle(envelope_id, requeue=False)

    def nack(self, envelope_id: str) -> None:
        self.queue.settle(envelope_id, requeue=True)
