"""Node placement, random-waypoint mobility and range queries."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .engine import Rng


@dataclass(frozen=True)
class Position:
    x: float
    y: float

    def distance(self, other: Position) -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class Area:
    """Axis-aligned rectangle [x0, x1] x [y0, y1]."""

    x0: float
    y0: float
    x1: float
    y1: float

    @classmethod
    def field(cls, width: float, height: float) -> Area:
        return cls(0.0, 0.0, width, height)

    def contains(self, p: Position) -> bool:
        return self.x0 <= p.x <= self.x1 and self.y0 <= p.y <= self.y1

    def sample(self, rng: Rng) -> Position:
        return Position(rng.uniform(self.x0, self.x1), rng.uniform(self.y0, self.y1))


class Phase(enum.Enum):
    MOVING = "moving"
    PAUSED = "paused"


@dataclass(frozen=True)
class MobilityState:
    current: Position  # position at phase_start
    target: Position
    speed: float
    phase: Phase
    phase_start: float
    phase_end: float  # arrival time while moving, pause_until while paused

    @classmethod
    def parked(cls, p: Position, since: float = 0.0, until: float = math.inf) -> MobilityState:
        return cls(p, p, 0.0, Phase.PAUSED, since, until)


class PhaseError(ValueError):
    """Position requested outside the current mobility phase."""


def place_nodes(count: int, area: Area, rng: Rng) -> list[Position]:
    if count < 1:
        raise ValueError("node count must be at least 1")
    return [area.sample(rng) for _ in range(count)]


def next_leg(
    state: MobilityState,
    rng: Rng,
    area: Area,
    speed_range: tuple[float, float],
    now: float | None = None,
) -> MobilityState:
    """Leave a pause toward a fresh uniform waypoint in ``area``."""
    start = state.phase_end if now is None else now
    here = position_at(state, start)
    target = area.sample(rng)
    speed = rng.uniform(*speed_range)
    if speed <= 0:
        raise ValueError("speed must be positive")
    duration = here.distance(target) / speed
    return MobilityState(here, target, speed, Phase.MOVING, start, start + duration)


def start_pause(
    state: MobilityState, rng: Rng, pause_range: tuple[float, float]
) -> MobilityState:
    """Park at the waypoint just reached for a random pause."""
    t = state.phase_end
    return MobilityState.parked(state.target, t, t + rng.uniform(*pause_range))


def position_at(state: MobilityState, t: float) -> Position:
    if not state.phase_start <= t <= state.phase_end:
        raise PhaseError(
            f"t={t} outside phase [{state.phase_start}, {state.phase_end}]"
        )
    if state.phase is Phase.PAUSED or t == state.phase_start:
        return state.current
    if t == state.phase_end:
        return state.target
    frac = (t - state.phase_start) / (state.phase_end - state.phase_start)
    c, g = state.current, state.target
    return Position(c.x + (g.x - c.x) * frac, c.y + (g.y - c.y) * frac)


def in_range(a: Position, b: Position, radius: float) -> bool:
    """Boundary inclusive."""
    return a.distance(b) <= radius

