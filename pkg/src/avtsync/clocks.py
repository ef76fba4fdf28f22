"""Drifting hardware clocks and the software logical clock built on them.

Hardware clocks tick at a nominal 1 MHz, so one tick is one microsecond of
logical time at rate correction zero.
"""

from __future__ import annotations

from dataclasses import dataclass

NOMINAL_FREQ = 1_000_000  # ticks per second
MAX_DRIFT = 1e-4


@dataclass(frozen=True)
class HardwareClock:
    drift: float = 0.0
    start_offset: int = 0
    nominal_freq: int = NOMINAL_FREQ

    def __post_init__(self) -> None:
        if abs(self.drift) > MAX_DRIFT:
            raise ValueError(f"drift {self.drift} exceeds +/-{MAX_DRIFT}")

    def read(self, t: float) -> int:
        return hw_read(self, t)


def hw_read(clock: HardwareClock, t: float) -> int:
    if t < 0:
        raise ValueError("simulation time must be non-negative")
    return clock.start_offset + round(clock.nominal_freq * (1.0 + clock.drift) * t)


class ClockError(ValueError):
    pass


@dataclass
class LogicalClock:
    """Piecewise-linear software clock: ``base_value + (hw - base_hw) * (1 + rate_corr)``.

    When ``bounds`` is set (AVT-driven clocks) the rate correction must stay
    inside it.
    """

    base_value: float
    base_hw: int
    rate_corr: float = 0.0
    bounds: tuple[float, float] | None = None

    @classmethod
    def following(cls, hw_now: int, bounds: tuple[float, float] | None = None) -> LogicalClock:
        """A logical clock equal to the hardware clock at ``hw_now``."""
        return cls(float(hw_now), hw_now, 0.0, bounds)

    def read(self, hw_now: int) -> float:
        return logical_read(self, hw_now)

    def adjust_offset(self, hw_now: int, delta: float) -> None:
        logical_adjust_offset(self, hw_now, delta)

    def set_rate(self, hw_now: int, s: float) -> None:
        logical_set_rate(self, hw_now, s)


def logical_read(clock: LogicalClock, hw_now: int) -> float:
    if hw_now < clock.base_hw:
        raise ClockError(f"hardware reading {hw_now} precedes base {clock.base_hw}")
    return clock.base_value + (hw_now - clock.base_hw) * (1.0 + clock.rate_corr)


def _rebase(clock: LogicalClock, hw_now: int) -> None:
    clock.base_value = logical_read(clock, hw_now)
    clock.base_hw = hw_now


def logical_adjust_offset(clock: LogicalClock, hw_now: int, delta: float) -> LogicalClock:
    _rebase(clock, hw_now)
    clock.base_value += delta
    return clock


def logical_set_rate(clock: LogicalClock, hw_now: int, s: float) -> LogicalClock:
    if clock.bounds is not None and not clock.bounds[0] <= s <= clock.bounds[1]:
        raise ClockError(f"rate correction {s} outside {clock.bounds}")
    if s <= -1.0:
        raise ClockError("rate correction must exceed -1")
    _rebase(clock, hw_now)
    clock.rate_corr = s
    return clock


def ideal_rate(drift: float) -> float:
    """Rate correction ``s`` with ``(1 + drift) * (1 + s) == 1``."""
    return 1.0 / (1.0 + drift) - 1.0
