"""Scenario configuration: an INI document with one section per subsystem.

Omitted keys take the defaults below, which reproduce the published
experiment (300 x 300 m field, 25 m range, 30 s beacons, 25000 s runs,
+/-100 ppm drift, AVT bounds +/-1e-4). Unknown sections or keys are errors.
An empty value means "unset" for optional fields.
"""

from __future__ import annotations

import configparser
import io
import types
import typing
from dataclasses import dataclass, field, fields, replace
from typing import Any

from .protocols import PROTOCOLS, ProtocolParams
from .radio import ChannelParams, PropModel


class ConfigError(ValueError):
    pass


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ConfigError(msg)


@dataclass(frozen=True)
class ScenarioSection:
    protocol: str = "avt_flood"
    seed: int = 1
    duration: float = 25000.0
    node_count: int = 100
    beacon_period: float = 30.0
    beacon_jitter: float = 0.1
    reference: int = 0
    reference_clock: str = "ideal"  # "ideal" or "hardware"

    def __post_init__(self) -> None:
        _require(self.protocol in PROTOCOLS, f"unknown protocol {self.protocol!r}; "
                 f"expected one of {sorted(PROTOCOLS)}")
        _require(0 <= self.seed < 2**64, "seed must be a 64-bit unsigned integer")
        _require(self.duration >= 0, "duration must be non-negative")
        _require(self.node_count >= 2, "node_count must be at least 2")
        _require(self.beacon_period > 0, "beacon_period must be positive")
        _require(self.beacon_jitter >= 0, "beacon_jitter must be non-negative")
        _require(0 <= self.reference < self.node_count, "reference must be a node id")
        _require(self.reference_clock in ("ideal", "hardware"),
                 "reference_clock must be 'ideal' or 'hardware'")


@dataclass(frozen=True)
class WorldSection:
    field_width: float = 300.0
    field_height: float = 300.0
    mobility: str = "random_waypoint"  # or "static"
    speed_min: float = 0.5
    speed_max: float = 1.5
    pause_min: float = 0.0
    pause_max: float = 60.0

    def __post_init__(self) -> None:
        _require(self.field_width > 0 and self.field_height > 0, "field dimensions must be positive")
        _require(self.mobility in ("random_waypoint", "static"),
                 "mobility must be 'random_waypoint' or 'static'")
        _require(0 < self.speed_min <= self.speed_max, "need 0 < speed_min <= speed_max")
        _require(0 <= self.pause_min <= self.pause_max, "need 0 <= pause_min <= pause_max")


@dataclass(frozen=True)
class ClocksSection:
    drift_bound: float = 1e-4
    start_offset_max: int = 1_000_000

    def __post_init__(self) -> None:
        _require(0 <= self.drift_bound <= 1e-4, "drift_bound must lie in [0, 1e-4]")
        _require(self.start_offset_max >= 0, "start_offset_max must be non-negative")


@dataclass(frozen=True)
class RadioSection:
    range: float = 25.0
    loss_prob: float = 0.05
    fade_width: float = 2.0
    prop_model: str = "gaussian_edge"
    frame_duration: float = 0.002
    backoff_min: float = 0.001
    backoff_max: float = 0.010
    max_retries: int = 5
    timestamp_jitter: float = 5.0  # us, std-dev of the per-reception stamp noise
    pulse_forward_delay: float = 0.01  # s, upper end of the pre-forward random wait

    def __post_init__(self) -> None:
        _require(self.prop_model in {m.value for m in PropModel},
                 "prop_model must be 'unit_disk' or 'gaussian_edge'")
        _require(self.timestamp_jitter >= 0, "timestamp_jitter must be non-negative")
        _require(self.pulse_forward_delay >= 0, "pulse_forward_delay must be non-negative")
        try:
            self.channel()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def channel(self) -> ChannelParams:
        return ChannelParams(
            range=self.range,
            loss_prob=self.loss_prob,
            fade_width=self.fade_width,
            prop_model=PropModel(self.prop_model),
            frame_duration=self.frame_duration,
            backoff_min=self.backoff_min,
            backoff_max=self.backoff_max,
            max_retries=self.max_retries,
        )


@dataclass(frozen=True)
class AvtSection:
    v_min: float = -1e-4
    v_max: float = 1e-4
    v0: float | None = None
    accel: float = 2.0
    decel: float = 1.0 / 3.0
    delta_min: float | None = None
    delta_max: float | None = None
    good_band: float = 1.0

    def __post_init__(self) -> None:
        _require(self.v_min < self.v_max, "need v_min < v_max")
        _require(self.accel > 1, "accel must exceed 1")
        _require(0 < self.decel < 1, "decel must lie in (0, 1)")
        _require(self.good_band >= 0, "good_band must be non-negative")
        if self.v0 is not None:
            _require(self.v_min <= self.v0 <= self.v_max, "v0 must lie in [v_min, v_max]")


@dataclass(frozen=True)
class TablesSection:
    regression_size: int = 8
    max_neighbors: int = 10
    neighbor_timeout: int = 5
    gtsp_estimator: str = "regression"  # or "two_point"

    def __post_init__(self) -> None:
        _require(self.gtsp_estimator in ("regression", "two_point"),
                 "gtsp_estimator must be 'regression' or 'two_point'")
        _require(self.regression_size >= 2, "regression_size must be at least 2")
        _require(self.max_neighbors >= 1, "max_neighbors must be positive")
        _require(self.neighbor_timeout >= 1, "neighbor_timeout must be positive")


@dataclass(frozen=True)
class MetricsSection:
    sample_interval: float = 10.0
    steady_fraction: float = 0.5  # trailing share of the run averaged for steady state

    def __post_init__(self) -> None:
        _require(self.sample_interval > 0, "sample_interval must be positive")
        _require(0 < self.steady_fraction <= 1, "steady_fraction must lie in (0, 1]")


@dataclass(frozen=True)
class PartitionSection:
    """Scripted disconnection.

    During [start, end] the listed ``nodes`` are parked inside a square
    isolation zone (side ``zone_size``) centred on the right edge of the
    field, while ``ferry`` shuttles between the zone and the main area. The
    main area is everything left of the zone minus a ``gap`` strip; all
    ordinary motion stays inside it.
    """

    enabled: bool = False
    start: float = 13000.0
    end: float = 17000.0
    nodes: tuple[int, ...] = ()
    ferry: int | None = None
    zone_size: float = 15.0
    gap: float = 60.0
    recovery_grace: float = 2000.0

    def __post_init__(self) -> None:
        if self.enabled:
            _require(0 <= self.start < self.end, "partition needs 0 <= start < end")
            _require(len(self.nodes) > 0, "partition needs at least one node")
            _require(self.zone_size > 0 and self.gap >= 0, "zone_size > 0 and gap >= 0 required")
            _require(self.ferry is None or self.ferry not in self.nodes,
                     "ferry cannot be a partitioned node")


SECTIONS: dict[str, type] = {
    "scenario": ScenarioSection,
    "world": WorldSection,
    "clocks": ClocksSection,
    "radio": RadioSection,
    "avt": AvtSection,
    "tables": TablesSection,
    "metrics": MetricsSection,
    "partition": PartitionSection,
}


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: ScenarioSection = field(default_factory=ScenarioSection)
    world: WorldSection = field(default_factory=WorldSection)
    clocks: ClocksSection = field(default_factory=ClocksSection)
    radio: RadioSection = field(default_factory=RadioSection)
    avt: AvtSection = field(default_factory=AvtSection)
    tables: TablesSection = field(default_factory=TablesSection)
    metrics: MetricsSection = field(default_factory=MetricsSection)
    partition: PartitionSection = field(default_factory=PartitionSection)

    def __post_init__(self) -> None:
        n = self.scenario.node_count
        p = self.partition
        if p.enabled:
            ids = list(p.nodes) + ([p.ferry] if p.ferry is not None else [])
            _require(all(0 <= i < n for i in ids), "partition node ids out of range")
            _require(self.scenario.reference not in ids,
                     "the reference node cannot be partitioned or ferry")
            _require(self.world.field_width - p.zone_size - p.gap > 0,
                     "field too narrow for the isolation zone and gap")
            _require(p.zone_size <= self.world.field_height, "zone taller than the field")
            _require(p.end <= self.scenario.duration, "partition window exceeds duration")

    def with_values(self, **overrides: Any) -> ScenarioConfig:
        """Override keys given as ``section__key=value``."""
        grouped: dict[str, dict[str, Any]] = {}
        for dotted, value in overrides.items():
            section, _, key = dotted.partition("__")
            grouped.setdefault(section, {})[key] = value
        try:
            return replace(self, **{s: replace(getattr(self, s), **kv) for s, kv in grouped.items()})
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    def protocol_params(self) -> ProtocolParams:
        a, t = self.avt, self.tables
        return ProtocolParams(
            v_min=a.v_min, v_max=a.v_max, v0=a.v0, accel=a.accel, decel=a.decel,
            delta_min=a.delta_min, delta_max=a.delta_max, good_band=a.good_band,
            table_size=t.regression_size, max_neighbors=t.max_neighbors,
            neighbor_timeout=t.neighbor_timeout, gtsp_estimator=t.gtsp_estimator,
        )


def _convert(raw: str, tp: Any, where: str) -> Any:
    raw = raw.strip()
    origin = typing.get_origin(tp)
    args = typing.get_args(tp)
    if origin in (typing.Union, types.UnionType) and type(None) in args:
        if raw == "":
            return None
        (inner,) = [a for a in args if a is not type(None)]
        return _convert(raw, inner, where)
    try:
        if tp is bool:
            low = raw.lower()
            if low in ("true", "yes", "on", "1"):
                return True
            if low in ("false", "no", "off", "0"):
                return False
            raise ValueError(raw)
        if tp is int:
            return int(raw)
        if tp is float:
            return float(raw)
        if tp is str:
            return raw
        if origin is tuple:
            return tuple(int(x) for x in raw.replace(",", " ").split())
    except ValueError:
        raise ConfigError(f"{where}: cannot parse {raw!r}") from None
    raise ConfigError(f"{where}: unsupported type {tp}")


def parse_config(text: str) -> ScenarioConfig:
    parser = configparser.ConfigParser(interpolation=None, comment_prefixes=("#", ";"))
    parser.optionxform = str  # keep keys case-sensitive
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    built = {}
    for section in parser.sections():
        cls = SECTIONS.get(section)
        if cls is None:
            raise ConfigError(f"unknown section [{section}]")
        hints = typing.get_type_hints(cls)
        kwargs = {}
        for key, raw in parser.items(section):
            if key not in hints:
                raise ConfigError(f"unknown key {section}.{key}")
            kwargs[key] = _convert(raw, hints[key], f"{section}.{key}")
        built[section] = cls(**kwargs)
    return ScenarioConfig(**built)


def _render_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ", ".join(str(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_config(cfg: ScenarioConfig) -> str:
    """Full resolved document; ``parse_config(render_config(c)) == c``."""
    out = io.StringIO()
    for name in SECTIONS:
        section = getattr(cfg, name)
        out.write(f"[{name}]\n")
        for f in fields(section):
            out.write(f"{f.name} = {_render_value(getattr(section, f.name))}\n".replace(" \n", "\n"))
        out.write("\n")
    return out.getvalue()


def load_config(path: str) -> ScenarioConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


__all__ = [
    "ConfigError",
    "ScenarioConfig",
    "parse_config",
    "render_config",
    "load_config",
]
