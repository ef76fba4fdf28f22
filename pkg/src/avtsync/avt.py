"""Adaptive value tracker.

An AVT proposes a value inside a closed search interval and moves it in
response to directional feedback. Repeated feedback in the same direction
multiplies the step by ``accel``; any change of direction, or a ``GOOD``,
shrinks it by ``decel``. The step is kept within ``[delta_min, delta_max]``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass


class Feedback(enum.Enum):
    UP = "up"
    DOWN = "down"
    GOOD = "good"


@dataclass
class Avt:
    v: float
    v_min: float
    v_max: float
    delta: float
    delta_min: float
    delta_max: float
    last_dir: Feedback | None = None
    accel: float = 2.0
    decel: float = 1.0 / 3.0

    def value(self) -> float:
        return self.v

    def adjust(self, f: Feedback) -> Avt:
        return avt_adjust(self, f)


def avt_new(
    v_min: float,
    v_max: float,
    v0: float | None = None,
    *,
    accel: float = 2.0,
    decel: float = 1.0 / 3.0,
    delta_max: float | None = None,
    delta_min: float | None = None,
) -> Avt:
    """Tracker over ``[v_min, v_max]``; step bounds default to width/4 and width*1e-6."""
    if not v_min < v_max:
        raise ValueError(f"empty search space [{v_min}, {v_max}]")
    if v0 is None:
        v0 = 0.5 * (v_min + v_max)
    if not v_min <= v0 <= v_max:
        raise ValueError(f"v0={v0} outside [{v_min}, {v_max}]")
    if accel <= 1.0:
        raise ValueError("accel must exceed 1")
    if not 0.0 < decel < 1.0:
        raise ValueError("decel must lie in (0, 1)")
    width = v_max - v_min
    dmax = width / 4.0 if delta_max is None else delta_max
    dmin = width * 1e-6 if delta_min is None else delta_min
    if not 0.0 < dmin <= dmax:
        raise ValueError("need 0 < delta_min <= delta_max")
    return Avt(v0, v_min, v_max, dmax, dmin, dmax, None, accel, decel)


def avt_value(avt: Avt) -> float:
    return avt.v


def avt_adjust(avt: Avt, f: Feedback) -> Avt:
    if f is Feedback.GOOD:
        avt.delta = max(avt.delta * avt.decel, avt.delta_min)
        avt.last_dir = None
        return avt
    if avt.last_dir is f:
        avt.delta = min(avt.delta * avt.accel, avt.delta_max)
    else:
        avt.delta = max(avt.delta * avt.decel, avt.delta_min)
    if f is Feedback.UP:
        avt.v = min(avt.v + avt.delta, avt.v_max)
    else:
        avt.v = max(avt.v - avt.delta, avt.v_min)
    avt.last_dir = f
    return avt
