"""Command line: ``run``, ``sweep``, ``validate`` and ``repro``.

Exit status: 0 success, 1 configuration error, 2 runtime failure. The
``AVTSYNC_OUT`` environment variable, when set, overrides ``--out``.
"""

from __future__ import annotations

import argparse
import glob
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence, Union

from .config import ConfigError, ScenarioConfig, load_config, parse_config, render_config
from .output import SUMMARY_HEADER, config_digest, summary_text, write_run
from .sim import simulate

log = logging.getLogger("avtsync")

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2
OUT_ENV = "AVTSYNC_OUT"

ConfigLike = Union[ScenarioConfig, str]


@dataclass
class RunOutcome:
    name: str
    row: dict[str, str] | None = None
    digest: str = ""
    error: str | None = None


def run_scenario(cfg: ScenarioConfig, out_dir: str, name: str = "run") -> dict[str, str]:
    """Simulate once and write ``<stem>.timeseries.csv`` and ``<stem>.summary.csv``."""
    return write_run(out_dir, name, simulate(cfg))


def _sweep_one(job: tuple[str, ConfigLike, str]) -> RunOutcome:
    name, cfg, out_dir = job
    try:
        if isinstance(cfg, str):
            cfg = parse_config(cfg)
        row = run_scenario(cfg, out_dir, name)
        return RunOutcome(name, row, config_digest(cfg))
    except Exception as exc:  # reported per run; other runs carry on
        return RunOutcome(name, error=f"{type(exc).__name__}: {exc}")


def _sort_key(o: RunOutcome) -> tuple:
    if o.row is None:
        return (1, o.name)
    return (0, o.row["protocol"], int(o.row["seed"]), o.name)


def sweep(
    jobs: Sequence[tuple[str, ConfigLike]], out_dir: str, parallelism: int = 1
) -> list[RunOutcome]:
    """Run independent scenarios; writes ``summary.csv`` sorted by (protocol, seed)."""
    if parallelism < 1:
        raise ValueError("parallelism must be positive")
    work = [(name, cfg, out_dir) for name, cfg in jobs]
    if parallelism == 1:
        outcomes = [_sweep_one(j) for j in work]
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            outcomes = list(pool.map(_sweep_one, work))
    outcomes.sort(key=_sort_key)
    ok = [o for o in outcomes if o.row is not None]
    comments = "".join(
        f"# run {o.name} protocol={o.row['protocol']} seed={o.row['seed']} config={o.digest}\n"
        for o in ok
    )
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "summary.csv"), "w", encoding="utf-8", newline="") as fh:
        fh.write(summary_text([o.row for o in ok], comments))
    for o in outcomes:
        if o.error:
            log.error("run %s failed: %s", o.name, o.error)
    return outcomes


def seed_jobs(name: str, cfg: ScenarioConfig, seeds: int) -> list[tuple[str, ScenarioConfig]]:
    return [(name, cfg.with_values(scenario__seed=s)) for s in range(1, seeds + 1)]


def _out_dir(arg: str | None, default: str) -> str:
    return os.environ.get(OUT_ENV) or arg or default


def _cmd_validate(args) -> int:
    cfg = load_config(args.config)
    sys.stdout.write(render_config(cfg))
    return EXIT_OK


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = cfg.with_values(scenario__seed=args.seed)
    name = os.path.splitext(os.path.basename(args.config))[0]
    row = run_scenario(cfg, _out_dir(args.out, "out"), name)
    print(",".join(SUMMARY_HEADER))
    print(",".join(row[k] for k in SUMMARY_HEADER))
    return EXIT_OK


def _cmd_sweep(args) -> int:
    paths = sorted(glob.glob(os.path.join(args.config_dir, "*.ini")))
    if not paths:
        raise ConfigError(f"no *.ini files in {args.config_dir}")
    jobs: list[tuple[str, ConfigLike]] = []
    for path in paths:
        name = os.path.splitext(os.path.basename(path))[0]
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        try:
            base = parse_config(text)
        except ConfigError:
            jobs.append((name, text))  # surfaces as a failed run
            continue
        jobs += seed_jobs(name, base, args.seeds)
    outcomes = sweep(jobs, _out_dir(args.out, "out"), args.jobs)
    failed = [o for o in outcomes if o.error]
    print(f"{len(outcomes) - len(failed)} runs ok, {len(failed)} failed")
    return EXIT_RUNTIME if failed else EXIT_OK


def _cmd_repro(args) -> int:
    from .repro import run_suite

    report = run_suite(args.scale, _out_dir(args.out, f"repro-{args.scale}"), args.jobs, args.seeds)
    print(report.text())
    return EXIT_OK if report.all_passed else EXIT_RUNTIME


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="avtsync", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="parse a config and print it fully resolved")
    v.add_argument("config")
    v.set_defaults(func=_cmd_validate)

    r = sub.add_parser("run", help="simulate one scenario")
    r.add_argument("config")
    r.add_argument("--out")
    r.add_argument("--seed", type=int)
    r.set_defaults(func=_cmd_run)

    s = sub.add_parser("sweep", help="every *.ini in a directory times N seeds")
    s.add_argument("config_dir")
    s.add_argument("--seeds", type=int, default=5)
    s.add_argument("--out")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=_cmd_sweep)

    q = sub.add_parser("repro", help="reproduce the qualitative claims")
    q.add_argument("scale", choices=("desk", "full"))
    q.add_argument("--out")
    q.add_argument("--jobs", type=int, default=1)
    q.add_argument("--seeds", type=int, default=5)
    q.set_defaults(func=_cmd_repro)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    except Exception as exc:
        log.exception("runtime failure: %s", exc)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
