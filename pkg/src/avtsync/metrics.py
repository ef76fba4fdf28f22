"""Global synchronization error sampling."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

TIMESERIES_HEADER = ("t", "global_error_us", "mean_abs_error_us", "max_node", "min_node")


@dataclass(frozen=True)
class ErrorSample:
    t: float
    global_error: float
    mean_abs_error: float
    max_node: int
    min_node: int

    def row(self) -> list[str]:
        return [
            f"{self.t:.6f}",
            f"{self.global_error:.6f}",
            f"{self.mean_abs_error:.6f}",
            str(self.max_node),
            str(self.min_node),
        ]


def sample_global_error(readings: Mapping[int, float], t: float) -> ErrorSample:
    """Spread of simultaneous logical readings (node id -> microseconds).

    ``mean_abs_error`` is the mean absolute deviation from the network mean.
    Ties for max/min go to the lowest node id.
    """
    if len(readings) < 2:
        raise ValueError("global error needs at least two nodes")
    ids = sorted(readings)
    hi = max(ids, key=lambda i: (readings[i], -i))
    lo = min(ids, key=lambda i: (readings[i], i))
    values = [readings[i] for i in ids]
    mean = sum(values) / len(values)
    mad = sum(abs(v - mean) for v in values) / len(values)
    return ErrorSample(t, readings[hi] - readings[lo], mad, hi, lo)


def average_global_error(samples: Sequence[ErrorSample], window: tuple[float, float]) -> float:
    a, b = window
    inside = [s.global_error for s in samples if a <= s.t <= b]
    if not inside:
        raise ValueError(f"no samples in window [{a}, {b}]")
    return sum(inside) / len(inside)


def peak_global_error(samples: Sequence[ErrorSample], window: tuple[float, float]) -> float:
    a, b = window
    inside = [s.global_error for s in samples if a <= s.t <= b]
    if not inside:
        raise ValueError(f"no samples in window [{a}, {b}]")
    return max(inside)
