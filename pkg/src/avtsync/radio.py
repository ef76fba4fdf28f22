"""Lossy broadcast channel with carrier sensing and collision corruption."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from .engine import Rng
from .world import Position


class PropModel(enum.Enum):
    UNIT_DISK = "unit_disk"
    GAUSSIAN_EDGE = "gaussian_edge"


@dataclass(frozen=True)
class ChannelParams:
    range: float = 25.0
    loss_prob: float = 0.05
    fade_width: float = 2.0
    prop_model: PropModel = PropModel.GAUSSIAN_EDGE
    frame_duration: float = 0.002
    backoff_min: float = 0.001
    backoff_max: float = 0.010
    max_retries: int = 5

    def __post_init__(self) -> None:
        if not 0.0 <= self.loss_prob <= 1.0:
            raise ValueError("loss_prob must lie in [0, 1]")
        if self.range <= 0:
            raise ValueError("range must be positive")
        if self.fade_width < 0:
            raise ValueError("fade_width must be non-negative")
        if self.frame_duration <= 0:
            raise ValueError("frame_duration must be positive")
        if not 0 <= self.backoff_min <= self.backoff_max:
            raise ValueError("backoff window must satisfy 0 <= min <= max")
        if self.max_retries < 0:
            raise ValueError("max_retries must be non-negative")


@dataclass(frozen=True)
class Transmission:
    tx_id: int
    sender: int
    start: float
    duration: float
    sender_pos: Position
    payload: Any = None

    def __post_init__(self) -> None:
        if self.duration <= 0:
            raise ValueError("transmission duration must be positive")

    @property
    def end(self) -> float:
        return self.start + self.duration

    def overlaps(self, other: Transmission) -> bool:
        return self.start < other.end and other.start < self.end

    def active_at(self, t: float) -> bool:
        return self.start <= t < self.end


@dataclass
class ChannelCounters:
    sent: int = 0
    delivered: int = 0
    lost_by_channel: int = 0
    corrupted_by_collision: int = 0
    dropped_by_mac: int = 0

    def as_dict(self) -> dict[str, int]:
        return dict(self.__dict__)


def reception_probability(distance: float, params: ChannelParams) -> float:
    if distance < 0:
        raise ValueError("distance must be non-negative")
    base = 1.0 - params.loss_prob
    if params.prop_model is PropModel.UNIT_DISK:
        return base if distance <= params.range else 0.0
    excess = distance - params.range
    if excess <= 0:
        return base
    if params.fade_width == 0:
        return 0.0
    return base * math.exp(-(excess * excess) / (2.0 * params.fade_width**2))


def broadcast(
    tx: Transmission,
    receivers: Mapping[int, Position],
    params: ChannelParams,
    rng: Rng,
    counters: ChannelCounters | None = None,
) -> list[tuple[int, float]]:
    """Independent reception draws for every node except the sender.

    Returns ``(receiver, delivery_time)`` pairs for the successful draws;
    collision checks happen later, at delivery time.
    """
    out = []
    for node, pos in receivers.items():
        if node == tx.sender:
            continue
        d = tx.sender_pos.distance(pos)
        p = reception_probability(d, params)
        if p <= 0.0:
            continue
        # draw only for reachable receivers; keeps the stream independent of far nodes
        if rng.random() < p:
            out.append((node, tx.end))
        elif counters is not None and d <= params.range:
            counters.lost_by_channel += 1
    return out


def detect_collisions(
    active: Iterable[Transmission], receiver_pos: Position, radius: float
) -> dict[int, bool]:
    """Corruption flag per transmission as heard at ``receiver_pos``.

    A transmission is corrupted when another transmission from a sender in
    range of the receiver overlaps it in time. Out-of-range senders neither
    interfere nor get flagged.
    """
    audible = [t for t in active if t.sender_pos.distance(receiver_pos) <= radius]
    flags = {}
    for t in audible:
        flags[t.tx_id] = any(o.tx_id != t.tx_id and o.overlaps(t) for o in audible)
    return flags


def channel_busy(
    sender_pos: Position, t: float, active: Iterable[Transmission], radius: float
) -> bool:
    return any(
        tx.active_at(t) and tx.sender_pos.distance(sender_pos) <= radius for tx in active
    )


def draw_backoff(params: ChannelParams, rng: Rng) -> float:
    return rng.uniform(params.backoff_min, params.backoff_max)


def csma_defer(
    sender_pos: Position,
    t: float,
    active: Iterable[Transmission],
    params: ChannelParams,
    rng: Rng,
) -> float | None:
    """Start time after sensing against a known set of transmissions.

    Returns ``None`` when the channel is still busy after ``max_retries``
    backoffs (a MAC drop).
    """
    active = list(active)
    start = t
    for attempt in range(params.max_retries + 1):
        if not channel_busy(sender_pos, start, active, params.range):
            return start
        if attempt == params.max_retries:
            break
        start += draw_backoff(params, rng)
    return None


@dataclass
class Medium:
    """Recent transmissions, pruned once they can no longer overlap a pending one."""

    params: ChannelParams
    transmissions: list[Transmission] = field(default_factory=list)
    _next_id: int = 0

    def new_id(self) -> int:
        self._next_id += 1
        return self._next_id

    def add(self, tx: Transmission) -> None:
        self.transmissions.append(tx)

    def prune(self, now: float) -> None:
        horizon = now - 2 * self.params.frame_duration
        if self.transmissions and self.transmissions[0].end < horizon:
            self.transmissions = [t for t in self.transmissions if t.end >= horizon]

    def overlapping(self, tx: Transmission) -> list[Transmission]:
        return [o for o in self.transmissions if o.overlaps(tx)]
