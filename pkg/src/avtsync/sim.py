"""One simulation run: wires mobility, radio, clocks and a protocol together."""

from __future__ import annotations

from dataclasses import dataclass

from .clocks import HardwareClock, LogicalClock, ideal_rate
from .config import ScenarioConfig
from .engine import GLOBAL, EventKind, EventQueue, Rng, RunSummary, SimEvent, run_until
from .metrics import ErrorSample, sample_global_error
from .protocols import FLOODING, Beacon, SyncNode, protocol_class
from .radio import (
    ChannelCounters,
    Medium,
    Transmission,
    broadcast,
    channel_busy,
    detect_collisions,
    draw_backoff,
)
from .world import (
    Area,
    MobilityState,
    Position,
    next_leg,
    place_nodes,
    position_at,
    start_pause,
)

NORMAL, GROUP, FERRY = "normal", "group", "ferry"


@dataclass
class NodeState:
    node_id: int
    hw: HardwareClock
    proto: SyncNode
    mobility: MobilityState
    rng: Rng  # per-node mobility stream
    role: str = NORMAL
    epoch: int = 0  # bumps invalidate queued mobility events

    def position(self, t: float) -> Position:
        return position_at(self.mobility, t)


@dataclass
class RunResult:
    config: ScenarioConfig
    samples: list[ErrorSample]
    counters: ChannelCounters
    summary: RunSummary
    trace: list[str] | None = None


class Simulation:
    def __init__(self, cfg: ScenarioConfig, trace: bool = False) -> None:
        self.cfg = cfg
        sc, wc, part = cfg.scenario, cfg.world, cfg.partition
        self.params = cfg.radio.channel()
        self.queue = EventQueue()
        self.medium = Medium(self.params)
        self.counters = ChannelCounters()
        self.samples: list[ErrorSample] = []
        self.trace: list[str] | None = [] if trace else None

        root = Rng(sc.seed)
        self.rng_channel = root.fork("channel")
        self.rng_mac = root.fork("mac")
        self.rng_timers = root.fork("timers")
        self.rng_stamp = root.fork("timestamp")
        rng_drift = root.fork("drift")
        rng_offset = root.fork("offset")

        self.field = Area.field(wc.field_width, wc.field_height)
        if part.enabled:
            w, h, z = wc.field_width, wc.field_height, part.zone_size
            self.main = Area(0.0, 0.0, w - z - part.gap, h)
            self.zone = Area(w - z, (h - z) / 2, w, (h + z) / 2)
        else:
            self.main = self.field
            self.zone = None
        self.speed_range = (wc.speed_min, wc.speed_max)
        self.pause_range = (wc.pause_min, wc.pause_max)
        self.moving = wc.mobility == "random_waypoint"

        cls = protocol_class(sc.protocol)
        pparams = cfg.protocol_params()
        positions = place_nodes(sc.node_count, self.main, root.fork("placement"))
        bound = cfg.clocks.drift_bound
        self.nodes: list[NodeState] = []
        for i, pos in enumerate(positions):
            hw = HardwareClock(
                drift=rng_drift.uniform(-bound, bound),
                start_offset=int(rng_offset.uniform(0, cfg.clocks.start_offset_max + 1)),
            )
            is_ref = sc.protocol in FLOODING and i == sc.reference
            clock = LogicalClock.following(hw.read(0.0))
            if is_ref and sc.reference_clock == "ideal":
                clock.rate_corr = ideal_rate(hw.drift)
            role = NORMAL
            if part.enabled and i in part.nodes:
                role = GROUP
            elif part.enabled and i == part.ferry:
                role = FERRY
            mob_rng = root.fork(f"mobility/{i}")
            if self.moving:
                mobility = MobilityState.parked(pos, 0.0, mob_rng.uniform(*self.pause_range))
            else:
                mobility = MobilityState.parked(pos)
            self.nodes.append(NodeState(i, hw, cls(i, clock, pparams, is_ref), mobility, mob_rng, role))

    # -- scheduling helpers -------------------------------------------------

    def _at(self, t: float, kind: EventKind, target: int = GLOBAL, payload=None) -> None:
        self.queue.schedule(SimEvent(t, kind, target, payload))

    def _seed_events(self) -> None:
        sc = self.cfg.scenario
        for n in self.nodes:
            if self.moving:
                self._at(n.mobility.phase_end, EventKind.PAUSE_EXPIRY, n.node_id, n.epoch)
            if n.proto.runs_timer:
                self._at(self.rng_timers.uniform(0.0, sc.beacon_period), EventKind.BEACON_TIMER, n.node_id)
        part = self.cfg.partition
        if part.enabled:
            self._at(part.start, EventKind.SCRIPT, GLOBAL, "partition_start")
        step = self.cfg.metrics.sample_interval
        if step <= sc.duration:
            self._at(step, EventKind.METRIC_SAMPLE, GLOBAL, 1)

    # -- mobility -------------------------------------------------------------

    def _leg_area(self, n: NodeState, t: float) -> Area:
        part = self.cfg.partition
        if n.role == FERRY and part.start <= t < part.end:
            here = n.position(t)
            return self.main if self.zone.contains(here) else self.zone
        return self.main

    def _on_pause_expiry(self, n: NodeState, t: float) -> None:
        n.mobility = next_leg(n.mobility, n.rng, self._leg_area(n, t), self.speed_range, now=t)
        self._at(n.mobility.phase_end, EventKind.WAYPOINT_ARRIVAL, n.node_id, n.epoch)

    def _on_arrival(self, n: NodeState, t: float) -> None:
        n.mobility = start_pause(n.mobility, n.rng, self.pause_range)
        self._at(n.mobility.phase_end, EventKind.PAUSE_EXPIRY, n.node_id, n.epoch)

    def _on_script(self, what: str, t: float) -> None:
        part = self.cfg.partition
        if what == "partition_start":
            for i in part.nodes:
                n = self.nodes[i]
                n.epoch += 1
                n.mobility = MobilityState.parked(self.zone.sample(n.rng), t, part.end)
                if self.moving:
                    self._at(part.end, EventKind.PAUSE_EXPIRY, n.node_id, n.epoch)

    # -- radio ---------------------------------------------------------------

    def _attempt(self, n: NodeState, beacon: Beacon, retries: int, t: float) -> None:
        pos = n.position(t)
        self.medium.prune(t)
        if channel_busy(pos, t, self.medium.transmissions, self.params.range):
            if retries >= self.params.max_retries:
                self.counters.dropped_by_mac += 1
                return
            backoff = draw_backoff(self.params, self.rng_mac)
            self._at(t + backoff, EventKind.MAC_ATTEMPT, n.node_id, (beacon, retries + 1))
            return
        end = t + self.params.frame_duration
        stamped = n.proto.stamp(beacon, n.hw.read(end))
        tx = Transmission(self.medium.new_id(), n.node_id, t, self.params.frame_duration, pos, stamped)
        self.medium.add(tx)
        self.counters.sent += 1
        where = {m.node_id: m.position(t) for m in self.nodes}
        for receiver, t_del in broadcast(tx, where, self.params, self.rng_channel, self.counters):
            self._at(t_del, EventKind.MESSAGE_DELIVERY, receiver, (tx, where[receiver]))

    def _on_delivery(self, n: NodeState, tx: Transmission, rpos: Position, t: float) -> None:
        flags = detect_collisions(self.medium.overlapping(tx), rpos, self.params.range)
        if flags.get(tx.tx_id, False):
            self.counters.corrupted_by_collision += 1
            return
        self.counters.delivered += 1
        beacon: Beacon = tx.payload
        remote = beacon.logical_time + self.rng_stamp.normal(0.0, self.cfg.radio.timestamp_jitter)
        forward = n.proto.on_receive(beacon, remote, n.hw.read(t))
        if forward is not None:
            delay = self.rng_mac.uniform(0.0, self.cfg.radio.pulse_forward_delay)
            self._at(t + delay, EventKind.MAC_ATTEMPT, n.node_id, (forward, 0))

    def _on_timer(self, n: NodeState, t: float) -> None:
        sc = self.cfg.scenario
        beacon = n.proto.on_timer(n.hw.read(t))
        if beacon is not None:
            self._attempt(n, beacon, 0, t)
        nxt = t + sc.beacon_period + self.rng_timers.uniform(0.0, sc.beacon_jitter)
        self._at(nxt, EventKind.BEACON_TIMER, n.node_id)

    # -- metrics -------------------------------------------------------------

    def readings(self, t: float) -> dict[int, float]:
        return {n.node_id: n.proto.read(n.hw.read(t)) for n in self.nodes}

    def _on_sample(self, k: int, t: float) -> None:
        self.samples.append(sample_global_error(self.readings(t), t))
        step = self.cfg.metrics.sample_interval
        if (k + 1) * step <= self.cfg.scenario.duration:
            self._at((k + 1) * step, EventKind.METRIC_SAMPLE, GLOBAL, k + 1)

    # -- dispatch ------------------------------------------------------------

    def handle(self, ev: SimEvent) -> None:
        t = ev.time
        kind = ev.kind
        if kind is EventKind.METRIC_SAMPLE:
            self._on_sample(ev.payload, t)
            return
        if kind is EventKind.SCRIPT:
            self._on_script(ev.payload, t)
            return
        n = self.nodes[ev.target]
        if kind is EventKind.MESSAGE_DELIVERY:
            self._on_delivery(n, *ev.payload, t)
        elif kind is EventKind.BEACON_TIMER:
            self._on_timer(n, t)
        elif kind is EventKind.MAC_ATTEMPT:
            beacon, retries = ev.payload
            self._attempt(n, beacon, retries, t)
        elif ev.payload == n.epoch:
            if kind is EventKind.PAUSE_EXPIRY:
                self._on_pause_expiry(n, t)
            else:
                self._on_arrival(n, t)

    def run(self) -> RunResult:
        self._seed_events()
        summary = run_until(self.queue, self.cfg.scenario.duration, self.handle, self.trace)
        return RunResult(self.cfg, self.samples, self.counters, summary, self.trace)


def simulate(cfg: ScenarioConfig, trace: bool = False) -> RunResult:
    return Simulation(cfg, trace).run()


__all__ = ["Simulation", "simulate", "RunResult", "NodeState"]
