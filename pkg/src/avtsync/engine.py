"""Discrete-event scheduler and seeded random streams.

Randomness comes from numpy's PCG64 bit generator (64-bit state
transitions, stable output across platforms). One root seed per run; each
subsystem draws from its own stream obtained with :meth:`Rng.fork`, which
seeds a fresh PCG64 from ``SeedSequence(seed, spawn_key=path)`` where
``path`` holds the first four bytes (big-endian) of the SHA-256 of every
fork label on the way down. Extra draws in one stream therefore never shift
another stream.
"""

from __future__ import annotations

import enum
import hashlib
import heapq
import itertools
import math
import zlib
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

import numpy as np

GLOBAL = -1  # target id for events not bound to a node


class EventKind(enum.IntEnum):
    """Event kinds; the integer value is the tie-break rank at equal times."""

    WAYPOINT_ARRIVAL = 0
    PAUSE_EXPIRY = 1
    SCRIPT = 2
    MESSAGE_DELIVERY = 3
    BEACON_TIMER = 4
    MAC_ATTEMPT = 5
    METRIC_SAMPLE = 6


@dataclass
class SimEvent:
    time: float
    kind: EventKind
    target: int = GLOBAL
    payload: Any = None


class SchedulingError(ValueError):
    """An event was scheduled in the past."""


class EventQueue:
    """Min-heap keyed on (time, kind rank, target id, insertion counter)."""

    def __init__(self) -> None:
        self._heap: list[tuple[float, int, int, int, SimEvent]] = []
        self._counter = itertools.count()
        self.now = 0.0

    def __len__(self) -> int:
        return len(self._heap)

    def schedule(self, event: SimEvent) -> int:
        if not event.time >= self.now:
            raise SchedulingError(
                f"event {event.kind.name} at t={event.time} is before now={self.now}"
            )
        handle = next(self._counter)
        heapq.heappush(
            self._heap, (event.time, int(event.kind), event.target, handle, event)
        )
        return handle

    def peek(self) -> SimEvent | None:
        return self._heap[0][4] if self._heap else None

    def pop(self) -> SimEvent:
        event = heapq.heappop(self._heap)[4]
        self.now = event.time
        return event


@dataclass
class RunSummary:
    processed: int = 0
    by_kind: Counter = field(default_factory=Counter)
    end_time: float = 0.0


def payload_digest(payload: Any) -> str:
    return f"{zlib.crc32(repr(payload).encode()):08x}"


def trace_line(event: SimEvent) -> str:
    """One tab-separated line: time, kind, target, payload digest."""
    return f"{event.time!r}\t{event.kind.name}\t{event.target}\t{payload_digest(event.payload)}"


def run_until(
    queue: EventQueue,
    horizon: float,
    handler: Callable[[SimEvent], None],
    trace: list[str] | None = None,
) -> RunSummary:
    """Dispatch every queued event with ``time <= horizon`` in queue order."""
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    summary = RunSummary(end_time=queue.now)
    while queue._heap and queue._heap[0][0] <= horizon:
        event = queue.pop()
        if trace is not None:
            trace.append(trace_line(event))
        handler(event)
        summary.processed += 1
        summary.by_kind[event.kind.name] += 1
    summary.end_time = queue.now
    return summary


def _label_key(label: str) -> int:
    return int.from_bytes(hashlib.sha256(label.encode()).digest()[:4], "big")


class Rng:
    """Seeded random stream (PCG64)."""

    def __init__(self, seed: int, path: Iterable[int] = ()) -> None:
        if not 0 <= seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        self.seed = seed
        self.path = tuple(path)
        seq = np.random.SeedSequence(seed, spawn_key=self.path)
        self._gen = np.random.Generator(np.random.PCG64(seq))

    def fork(self, label: str) -> Rng:
        return Rng(self.seed, self.path + (_label_key(label),))

    def random(self) -> float:
        return float(self._gen.random())

    def uniform(self, lo: float, hi: float) -> float:
        """Draw from [lo, hi); returns ``lo`` when the interval is empty."""
        if lo > hi:
            raise ValueError(f"uniform: lo={lo} > hi={hi}")
        if lo == hi:
            return lo
        x = lo + (hi - lo) * self.random()
        # float rounding can land exactly on hi
        return x if x < hi else math.nextafter(hi, lo)

    def normal(self, mean: float, sigma: float) -> float:
        if sigma == 0:
            return mean
        return float(self._gen.normal(mean, sigma))

    def bernoulli(self, p: float) -> bool:
        return self.random() < p
