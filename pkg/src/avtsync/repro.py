"""Scenario suites for the two qualitative claims, checked from emitted CSVs.

* ordering: median steady-state global error over >= 5 seeds satisfies
  GTSP > AVT-p2p > max(AVT-flood, PulseSync).
* disconnection: with a scripted partition, PulseSync's in-window peak is
  at least ``factor`` times AVT-flood's, and both settle back afterwards.
"""

from __future__ import annotations

import csv
import glob
import io
import os
import statistics
from dataclasses import dataclass, field
from typing import Sequence

from .cli import seed_jobs, sweep
from .config import ScenarioConfig
from .metrics import ErrorSample, average_global_error, peak_global_error
from .output import read_summary, read_timeseries

ORDER = ("gtsp", "avt_p2p", "avt_flood", "pulsesync")
MIN_SEEDS = 5


@dataclass
class Verdict:
    claim: str
    passed: bool
    detail: str
    stats: dict[str, float] = field(default_factory=dict)


def desk_config() -> ScenarioConfig:
    return ScenarioConfig().with_values(
        scenario__node_count=20,
        scenario__duration=5000.0,
        world__field_width=100.0,
        world__field_height=100.0,
    )


def full_config() -> ScenarioConfig:
    return ScenarioConfig()


def partition_config(scale: str) -> ScenarioConfig:
    if scale == "desk":
        return ScenarioConfig().with_values(
            scenario__node_count=20,
            world__field_width=200.0,
            world__field_height=100.0,
            partition__enabled=True,
            partition__nodes=(15, 16, 17, 18, 19),
            partition__ferry=14,
        )
    # main area keeps the 300 x 300 m of the published setup
    return ScenarioConfig().with_values(
        world__field_width=375.0,
        world__field_height=300.0,
        partition__enabled=True,
        partition__nodes=tuple(range(90, 100)),
        partition__ferry=89,
    )


def check_protocol_ordering(rows: Sequence[dict[str, str]]) -> Verdict:
    """Rows are summary-CSV records (``protocol``, ``seed``, ``steady_state_avg_us``)."""
    per: dict[str, dict[int, float]] = {p: {} for p in ORDER}
    for r in rows:
        if r["protocol"] in per and r["steady_state_avg_us"]:
            per[r["protocol"]][int(r["seed"])] = float(r["steady_state_avg_us"])
    seeds = set.intersection(*(set(v) for v in per.values()))
    missing = [p for p in ORDER if not per[p]]
    if missing:
        raise ValueError(f"missing protocol rows: {missing}")
    if len(seeds) < MIN_SEEDS:
        raise ValueError(f"need all four protocols on >= {MIN_SEEDS} seeds, got {len(seeds)}")
    med = {p: statistics.median(per[p][s] for s in seeds) for p in ORDER}
    flood_best = max(med["avt_flood"], med["pulsesync"])
    ok = med["gtsp"] > med["avt_p2p"] > flood_best
    detail = (
        f"medians over {len(seeds)} seeds (us): "
        + ", ".join(f"{p}={med[p]:.1f}" for p in ORDER)
        + f"; need gtsp > avt_p2p > max(avt_flood, pulsesync)"
    )
    return Verdict("protocol_ordering", ok, detail, med)


def _window(cfg: ScenarioConfig) -> tuple[float, float]:
    p = cfg.partition
    if not p.enabled:
        raise ValueError("trace has no partition window configured")
    return p.start, p.end


def _robustness_stats(cfg: ScenarioConfig, samples: list[ErrorSample]) -> tuple[float, float, float]:
    start, end = _window(cfg)
    span = end - start
    pre = average_global_error(samples, (max(0.0, start - span), start))
    peak = peak_global_error(samples, (start, end))
    post = average_global_error(
        samples, (end + cfg.partition.recovery_grace, cfg.scenario.duration)
    )
    return pre, peak, post


def check_disconnection_robustness(
    flood: Sequence[tuple[ScenarioConfig, list[ErrorSample]]],
    pulse: Sequence[tuple[ScenarioConfig, list[ErrorSample]]],
    factor: float = 2.0,
    recovery_factor: float = 2.0,
) -> Verdict:
    """Compare median in-window peaks across seeds; every run must recover.

    A run has recovered when its mean error after the window (past the
    grace period) is at most ``recovery_factor`` times its mean error over
    an equally long stretch before the window.
    """
    if not flood or not pulse:
        raise ValueError("need traces for both avt_flood and pulsesync")
    stats = {}
    recovered = True
    peaks: dict[str, list[float]] = {"avt_flood": [], "pulsesync": []}
    for name, traces in (("avt_flood", flood), ("pulsesync", pulse)):
        for cfg, samples in traces:
            try:
                pre, peak, post = _robustness_stats(cfg, samples)
            except ValueError as exc:
                raise ValueError(f"{name} seed {cfg.scenario.seed}: {exc}") from None
            peaks[name].append(peak)
            if post > recovery_factor * pre:
                recovered = False
            stats[f"{name}_seed{cfg.scenario.seed}_peak"] = peak
            stats[f"{name}_seed{cfg.scenario.seed}_post_over_pre"] = post / pre
    flood_peak = statistics.median(peaks["avt_flood"])
    pulse_peak = statistics.median(peaks["pulsesync"])
    stats.update(avt_flood_peak=flood_peak, pulsesync_peak=pulse_peak)
    ok = pulse_peak >= factor * flood_peak and recovered
    detail = (
        f"median in-window peak (us): pulsesync={pulse_peak:.1f}, avt_flood={flood_peak:.1f} "
        f"(ratio {pulse_peak / flood_peak:.2f}, need >= {factor}); "
        f"all runs recovered: {recovered}"
    )
    return Verdict("disconnection_robustness", ok, detail, stats)


@dataclass
class SuiteReport:
    scale: str
    verdicts: list[Verdict]
    failures: list[str] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return not self.failures and all(v.passed for v in self.verdicts)

    def text(self) -> str:
        lines = [f"reproduction suite ({self.scale})"]
        for v in self.verdicts:
            lines.append(f"  [{'PASS' if v.passed else 'FAIL'}] {v.claim}: {v.detail}")
        for f in self.failures:
            lines.append(f"  [ERROR] {f}")
        return "\n".join(lines) + "\n"

    def csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("claim", "verdict", "detail"))
        for v in self.verdicts:
            w.writerow((v.claim, "pass" if v.passed else "fail", v.detail))
        return buf.getvalue()


def ordering_jobs(scale: str, seeds: int) -> list[tuple[str, ScenarioConfig]]:
    base = desk_config() if scale == "desk" else full_config()
    jobs = []
    for proto in ORDER:
        jobs += seed_jobs("ordering", base.with_values(scenario__protocol=proto), seeds)
    return jobs


def partition_jobs(scale: str, seeds: int) -> list[tuple[str, ScenarioConfig]]:
    base = partition_config(scale)
    jobs = []
    for proto in ("avt_flood", "pulsesync"):
        jobs += seed_jobs("partition", base.with_values(scenario__protocol=proto), seeds)
    return jobs


def load_partition_traces(out_dir: str, protocol: str):
    paths = sorted(glob.glob(os.path.join(out_dir, f"partition__{protocol}__seed*.timeseries.csv")))
    return [read_timeseries(p) for p in paths]


def run_suite(scale: str, out_dir: str, parallelism: int = 1, seeds: int = MIN_SEEDS) -> SuiteReport:
    ord_dir = os.path.join(out_dir, "ordering")
    part_dir = os.path.join(out_dir, "partition")
    failures = []
    for jobs, where in ((ordering_jobs(scale, seeds), ord_dir), (partition_jobs(scale, seeds), part_dir)):
        failures += [f"{o.name}: {o.error}" for o in sweep(jobs, where, parallelism) if o.error]

    verdicts = []
    try:
        verdicts.append(check_protocol_ordering(read_summary(os.path.join(ord_dir, "summary.csv"))))
    except ValueError as exc:
        failures.append(f"protocol_ordering: {exc}")
    try:
        verdicts.append(check_disconnection_robustness(
            load_partition_traces(part_dir, "avt_flood"),
            load_partition_traces(part_dir, "pulsesync"),
        ))
    except ValueError as exc:
        failures.append(f"disconnection_robustness: {exc}")

    report = SuiteReport(scale, verdicts, failures)
    with open(os.path.join(out_dir, "report.txt"), "w", encoding="utf-8") as fh:
        fh.write(report.text())
    with open(os.path.join(out_dir, "verdicts.csv"), "w", encoding="utf-8", newline="") as fh:
        fh.write(report.csv())
    return report
