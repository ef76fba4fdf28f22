"""The four synchronization protocols as per-node state machines.

Every node object exposes the same three hooks, all driven by the simulator
with the node's current hardware reading:

* ``on_timer(hw_now)``: periodic beacon timer; returns a beacon to broadcast
  or ``None``.
* ``on_receive(beacon, remote_time, hw_now)``: an uncorrupted beacon arrived;
  ``remote_time`` is the sender's stamp as observed (timestamping jitter
  included). Returns a beacon to forward right away, or ``None``.
* ``stamp(beacon, hw_now)``: re-stamp an outgoing beacon with the local clock
  at the moment it leaves the radio.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import ClassVar

from .avt import Avt, Feedback, avt_new
from .clocks import LogicalClock


@dataclass(frozen=True)
class Beacon:
    sender: int
    seq: int
    logical_time: float
    hw_time: int


@dataclass(frozen=True)
class ProtocolParams:
    v_min: float = -1e-4
    v_max: float = 1e-4
    v0: float | None = None
    accel: float = 2.0
    decel: float = 1.0 / 3.0
    delta_min: float | None = None
    delta_max: float | None = None
    good_band: float = 1.0  # |error| in us treated as "good"
    table_size: int = 8
    max_neighbors: int = 10
    neighbor_timeout: int = 5  # beacon periods
    gtsp_estimator: str = "regression"  # or "two_point"

    def new_avt(self) -> Avt:
        return avt_new(
            self.v_min,
            self.v_max,
            self.v0,
            accel=self.accel,
            decel=self.decel,
            delta_min=self.delta_min,
            delta_max=self.delta_max,
        )


def sync_error(remote_time: float, local_time: float) -> float:
    """Positive when the local clock is behind the sender."""
    return remote_time - local_time


def derive_feedback(error: float, good_band: float = 0.0) -> Feedback:
    if error > good_band:
        return Feedback.UP
    if error < -good_band:
        return Feedback.DOWN
    return Feedback.GOOD


class SyncNode:
    name: ClassVar[str] = ""
    runs_timer: ClassVar[bool] = True

    def __init__(
        self,
        node_id: int,
        clock: LogicalClock,
        params: ProtocolParams,
        is_reference: bool = False,
    ) -> None:
        self.node_id = node_id
        self.clock = clock
        self.params = params
        self.is_reference = is_reference

    def read(self, hw_now: int) -> float:
        return self.clock.read(hw_now)

    def stamp(self, beacon: Beacon, hw_now: int) -> Beacon:
        return replace(beacon, logical_time=self.clock.read(hw_now), hw_time=hw_now)

    def _beacon(self, seq: int, hw_now: int) -> Beacon:
        return Beacon(self.node_id, seq, self.clock.read(hw_now), hw_now)

    def on_timer(self, hw_now: int) -> Beacon | None:
        raise NotImplementedError

    def on_receive(self, beacon: Beacon, remote_time: float, hw_now: int) -> Beacon | None:
        raise NotImplementedError


class _AvtNode(SyncNode):
    # fraction of the measured error folded into the offset
    offset_gain: ClassVar[float] = 1.0

    def __init__(self, node_id, clock, params, is_reference=False):
        super().__init__(node_id, clock, params, is_reference)
        self.avt = params.new_avt()
        if not is_reference:
            clock.bounds = (params.v_min, params.v_max)
            clock.set_rate(clock.base_hw, self.avt.value())

    def _track(self, remote_time: float, hw_now: int) -> float:
        error = sync_error(remote_time, self.clock.read(hw_now))
        self.clock.adjust_offset(hw_now, self.offset_gain * error)
        self.avt.adjust(derive_feedback(error, self.params.good_band))
        self.clock.set_rate(hw_now, self.avt.value())
        return error


class AvtFloodNode(_AvtNode):
    """Flooding AVT: the reference numbers its beacons, others relay the newest."""

    name = "avt_flood"

    def __init__(self, node_id, clock, params, is_reference=False):
        super().__init__(node_id, clock, params, is_reference)
        self.highest_seq = 0

    def on_timer(self, hw_now: int) -> Beacon | None:
        if self.is_reference:
            self.highest_seq += 1
        elif self.highest_seq == 0:
            return None
        return self._beacon(self.highest_seq, hw_now)

    def on_receive(self, beacon: Beacon, remote_time: float, hw_now: int) -> Beacon | None:
        if self.is_reference or beacon.seq <= self.highest_seq:
            return None
        self._track(remote_time, hw_now)
        self.highest_seq = beacon.seq
        return None


class AvtP2pNode(_AvtNode):
    """Peer-to-peer AVT: every beacon from anyone moves the clock halfway."""

    name = "avt_p2p"
    offset_gain = 0.5

    def __init__(self, node_id, clock, params, is_reference=False):
        super().__init__(node_id, clock, params, False)
        self.seq = 0

    def on_timer(self, hw_now: int) -> Beacon | None:
        self.seq += 1
        return self._beacon(self.seq, hw_now)

    def on_receive(self, beacon: Beacon, remote_time: float, hw_now: int) -> Beacon | None:
        self._track(remote_time, hw_now)
        return None


class InsufficientData(ValueError):
    """Fewer than two distinct abscissae; no slope can be fitted."""


@dataclass(frozen=True)
class LineFit:
    slope: float
    x_mean: float
    y_mean: float

    @property
    def intercept(self) -> float:
        return self.y_mean - self.slope * self.x_mean

    def at(self, x: float) -> float:
        return self.y_mean + self.slope * (x - self.x_mean)


def fit_line(points: list[tuple[float, float]]) -> LineFit:
    """Ordinary least squares of y on x, computed on centred data."""
    n = len(points)
    if n < 2:
        raise InsufficientData(f"{n} point(s)")
    x0, y0 = points[0]
    # shift by the first point before averaging to keep large tick counts exact
    dx = [x - x0 for x, _ in points]
    dy = [y - y0 for _, y in points]
    mx = sum(dx) / n
    my = sum(dy) / n
    sxx = sum((x - mx) ** 2 for x in dx)
    if sxx == 0:
        raise InsufficientData("all x values are equal")
    sxy = sum((x - mx) * (y - my) for x, y in zip(dx, dy))
    return LineFit(sxy / sxx, x0 + mx, y0 + my)


def least_squares_fit(points: list[tuple[float, float]]) -> tuple[float, float]:
    fit = fit_line(points)
    return fit.slope, fit.intercept


class PulseSyncNode(SyncNode):
    """Reference pulses are forwarded at once; receivers regress on the last entries."""

    name = "pulsesync"

    def __init__(self, node_id, clock, params, is_reference=False):
        super().__init__(node_id, clock, params, is_reference)
        self.highest_seq = 0
        self.table: list[tuple[int, float]] = []

    @property
    def runs_timer(self) -> bool:  # type: ignore[override]
        return self.is_reference

    def on_timer(self, hw_now: int) -> Beacon | None:
        if not self.is_reference:
            return None
        self.highest_seq += 1
        return self._beacon(self.highest_seq, hw_now)

    def on_receive(self, beacon: Beacon, remote_time: float, hw_now: int) -> Beacon | None:
        if self.is_reference or beacon.seq <= self.highest_seq:
            return None
        self.highest_seq = beacon.seq
        self.table.append((hw_now, remote_time))
        if len(self.table) > self.params.table_size:
            del self.table[0]
        try:
            fit = fit_line(self.table)
        except InsufficientData:
            rate = 0.0 if len(self.table) == 1 else self.clock.rate_corr
            self.clock.base_value = remote_time
            self.clock.base_hw = hw_now
            self.clock.rate_corr = rate
        else:
            self.clock.base_value = fit.at(hw_now)
            self.clock.base_hw = hw_now
            self.clock.rate_corr = fit.slope - 1.0
        return self._beacon(beacon.seq, hw_now)


@dataclass
class Neighbor:
    remote: float  # last observed logical time
    local_hw: int  # own hardware reading when it was observed
    last_heard: int  # own beacon-period index
    remote_rate: float | None = None  # neighbor logical us per own tick
    history: list[tuple[int, float]] = field(default_factory=list)


class GtspNode(SyncNode):
    """Gradient-style averaging over a bounded neighbor table."""

    name = "gtsp"

    def __init__(self, node_id, clock, params, is_reference=False):
        super().__init__(node_id, clock, params, False)
        self.period = 0
        self.seq = 0
        self.neighbors: dict[int, Neighbor] = {}

    def on_receive(self, beacon: Beacon, remote_time: float, hw_now: int) -> Beacon | None:
        entry = self.neighbors.get(beacon.sender)
        if entry is not None:
            if self.params.gtsp_estimator == "two_point":
                if hw_now > entry.local_hw:
                    entry.remote_rate = (remote_time - entry.remote) / (hw_now - entry.local_hw)
            else:
                entry.history.append((hw_now, remote_time))
                if len(entry.history) > self.params.table_size:
                    del entry.history[0]
                try:
                    entry.remote_rate = fit_line(entry.history).slope
                except InsufficientData:
                    pass
            entry.remote = remote_time
            entry.local_hw = hw_now
            entry.last_heard = self.period
        elif len(self.neighbors) < self.params.max_neighbors:
            self.neighbors[beacon.sender] = Neighbor(
                remote_time, hw_now, self.period, history=[(hw_now, remote_time)]
            )
        return None

    def evict_stale(self) -> None:
        limit = self.params.neighbor_timeout
        for nid in [n for n, e in self.neighbors.items() if self.period - e.last_heard >= limit]:
            del self.neighbors[nid]

    def on_timer(self, hw_now: int) -> Beacon | None:
        self.period += 1
        self.evict_stale()
        if self.neighbors:
            own_rate = 1.0 + self.clock.rate_corr
            local = self.clock.read(hw_now)
            rates = [own_rate]
            diffs = [0.0]
            for e in self.neighbors.values():
                r = own_rate if e.remote_rate is None else e.remote_rate
                rates.append(r)
                diffs.append(e.remote + r * (hw_now - e.local_hw) - local)
            self.clock.adjust_offset(hw_now, sum(diffs) / len(diffs))
            self.clock.set_rate(hw_now, sum(rates) / len(rates) - 1.0)
        self.seq += 1
        return self._beacon(self.seq, hw_now)


PROTOCOLS: dict[str, type[SyncNode]] = {
    cls.name: cls for cls in (AvtFloodNode, AvtP2pNode, PulseSyncNode, GtspNode)
}
FLOODING = frozenset({"avt_flood", "pulsesync"})


def protocol_class(name: str) -> type[SyncNode]:
    try:
        return PROTOCOLS[name]
    except KeyError:
        raise ValueError(f"unknown protocol {name!r}; expected one of {sorted(PROTOCOLS)}") from None
