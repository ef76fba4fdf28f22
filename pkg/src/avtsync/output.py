"""CSV emission and re-reading.

Every file starts with ``#`` comment lines carrying the resolved config, so a
CSV alone is enough to rebuild the scenario it came from.
"""

from __future__ import annotations

import csv
import hashlib
import io
import os
from typing import Iterable, Sequence

from .config import ScenarioConfig, parse_config, render_config
from .metrics import TIMESERIES_HEADER, ErrorSample, average_global_error, peak_global_error
from .sim import RunResult

SUMMARY_HEADER = (
    "scenario",
    "protocol",
    "seed",
    "steady_state_avg_us",
    "peak_error_us",
    "sent",
    "delivered",
    "lost_by_channel",
    "corrupted_by_collision",
    "dropped_by_mac",
)


def config_digest(cfg: ScenarioConfig) -> str:
    return hashlib.sha256(render_config(cfg).encode()).hexdigest()[:16]


def _config_comments(cfg: ScenarioConfig) -> str:
    lines = [f"# seed = {cfg.scenario.seed}"]
    lines += [f"# {line}" if line else "#" for line in render_config(cfg).splitlines()]
    return "\n".join(lines) + "\n"


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def steady_window(cfg: ScenarioConfig) -> tuple[float, float]:
    d = cfg.scenario.duration
    return d * (1.0 - cfg.metrics.steady_fraction), d


def summary_row(name: str, result: RunResult) -> dict[str, str]:
    cfg = result.config
    samples = result.samples
    try:
        steady = f"{average_global_error(samples, steady_window(cfg)):.6f}"
        peak = f"{peak_global_error(samples, (0.0, cfg.scenario.duration)):.6f}"
    except ValueError:
        steady = peak = ""
    row = {
        "scenario": name,
        "protocol": cfg.scenario.protocol,
        "seed": str(cfg.scenario.seed),
        "steady_state_avg_us": steady,
        "peak_error_us": peak,
    }
    row.update({k: str(v) for k, v in result.counters.as_dict().items()})
    return row


def timeseries_text(result: RunResult) -> str:
    return _config_comments(result.config) + _csv_text(
        TIMESERIES_HEADER, (s.row() for s in result.samples)
    )


def summary_text(rows: Sequence[dict[str, str]], comments: str = "") -> str:
    return comments + _csv_text(SUMMARY_HEADER, ([r[k] for k in SUMMARY_HEADER] for r in rows))


def run_stem(name: str, cfg: ScenarioConfig) -> str:
    return f"{name}__{cfg.scenario.protocol}__seed{cfg.scenario.seed}"


def write_run(out_dir: str, name: str, result: RunResult) -> dict[str, str]:
    """Write the time series and one-row summary; return the summary row."""
    os.makedirs(out_dir, exist_ok=True)
    stem = os.path.join(out_dir, run_stem(name, result.config))
    row = summary_row(name, result)
    with open(stem + ".timeseries.csv", "w", encoding="utf-8", newline="") as fh:
        fh.write(timeseries_text(result))
    with open(stem + ".summary.csv", "w", encoding="utf-8", newline="") as fh:
        fh.write(summary_text([row], _config_comments(result.config)))
    return row


def _split_comments(text: str) -> tuple[list[str], str]:
    comments, body = [], []
    for line in text.splitlines(keepends=True):
        (comments if line.startswith("#") else body).append(line)
    return comments, "".join(body)


def read_timeseries(path: str) -> tuple[ScenarioConfig, list[ErrorSample]]:
    with open(path, encoding="utf-8") as fh:
        comments, body = _split_comments(fh.read())
    # first comment line is the seed echo; the rest is the rendered config
    cfg_text = "\n".join(c[2:].rstrip("\n") if c.startswith("# ") else "" for c in comments[1:])
    cfg = parse_config(cfg_text)
    samples = [
        ErrorSample(float(r["t"]), float(r["global_error_us"]), float(r["mean_abs_error_us"]),
                    int(r["max_node"]), int(r["min_node"]))
        for r in csv.DictReader(io.StringIO(body))
    ]
    return cfg, samples


def read_summary(path: str) -> list[dict[str, str]]:
    with open(path, encoding="utf-8") as fh:
        _, body = _split_comments(fh.read())
    return list(csv.DictReader(io.StringIO(body)))
