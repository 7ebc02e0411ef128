"""Command-line front end.

Four subcommands: run executes the scenario and writes the per-round CSV
plus summary JSON (and a lifetime figure); trace additionally writes the
chain/leader trace JSON; compare runs both routing modes per seed and
tabulates the lifetime deltas; sweep re-runs the scenario across values of
one numeric parameter.

Scenario files are the single source of truth; the only CLI override is
--seeds. Multi-seed compare and sweep can run simulations concurrently
when AQUACHAIN_THREADS is set (unset or 0 means sequential); artifact
ordering always follows input order, never completion order.

Exit codes: 0 success, 1 runtime failure, 2 configuration/usage failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import os
import statistics
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import plots
from .engine import SimResult, run_simulation
from .errors import ComparisonError, ConfigurationError, ProtocolError
from .metrics import (
    compare,
    comparison_dict,
    compute_lifetime,
    export_rounds,
    export_summary,
    export_trace,
)
from .scenario import Scenario, load_scenario

SWEEPABLE = (
    "threshold",
    "alpha",
    "drift_sigma",
    "localization_interval",
    "congestion_delta",
    "congestion_decay",
)


def _thread_cap() -> int:
    raw = os.environ.get("AQUACHAIN_THREADS", "")
    if not raw:
        return 0
    try:
        return max(0, int(raw))
    except ValueError:
        raise ConfigurationError(
            f"AQUACHAIN_THREADS must be an integer (got {raw!r})"
        ) from None


def _run_jobs(fn, jobs: list):
    """Run independent jobs, threaded if allowed, preserving input order."""
    cap = _thread_cap()
    if cap <= 1 or len(jobs) <= 1:
        return [fn(job) for job in jobs]
    with ThreadPoolExecutor(max_workers=min(cap, len(jobs))) as pool:
        return list(pool.map(fn, jobs))


def _run_one(scn: Scenario, seed: int, mode: str | None = None) -> SimResult:
    return run_simulation(
        scn.config_for_seed(seed),
        scn.params,
        mode=mode or scn.mode,
        max_rounds=scn.max_rounds,
        congestion_delta=scn.congestion_delta,
        congestion_decay=scn.congestion_decay,
    )


def _seed_name(base: str, seed: int, many: bool) -> str:
    """Suffix per-seed artifacts only when several seeds would collide."""
    if not many:
        return base
    stem, dot, ext = base.rpartition(".")
    if not dot:
        return f"{base}_seed{seed}"
    return f"{stem}_seed{seed}.{ext}"


def _median(values) -> float | None:
    present = [v for v in values if v is not None]
    if not present:
        return None
    return statistics.median(present)


def cmd_run(scn: Scenario, seeds: tuple[int, ...], out_dir: Path, with_trace: bool = False) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    many = len(seeds) > 1
    for seed in seeds:
        result = _run_one(scn, seed)
        metrics = compute_lifetime(result.reports, result.config.n)
        rounds_path = out_dir / _seed_name(scn.output.rounds_csv, seed, many)
        summary_path = out_dir / _seed_name(scn.output.summary_json, seed, many)
        export_rounds(result.reports, rounds_path)
        export_summary(metrics, seed, result.mode, summary_path)
        print(rounds_path)
        print(summary_path)
        if with_trace:
            trace_path = out_dir / _seed_name(scn.output.trace_json, seed, many)
            export_trace(result.trace, trace_path)
            print(trace_path)
        fig_path = out_dir / _seed_name("lifetime.png", seed, many)
        plots.plot_lifetime(result, fig_path)
        print(fig_path)
    return 0


_COMPARE_COLUMNS = (
    "seed",
    "parametric_fnd",
    "parametric_hnd",
    "parametric_lnd",
    "parametric_energy_j",
    "parametric_bits_per_joule",
    "baseline_fnd",
    "baseline_hnd",
    "baseline_lnd",
    "baseline_energy_j",
    "baseline_bits_per_joule",
    "fnd_delta",
    "hnd_delta",
    "lnd_delta",
    "energy_delta",
    "delivered_delta",
)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def cmd_compare(scn: Scenario, seeds: tuple[int, ...], out_dir: Path) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)

    def job(seed: int):
        parametric = _run_one(scn, seed, "parametric")
        baseline = _run_one(scn, seed, "baseline")
        return parametric, baseline, compare(parametric, baseline)

    pairs = _run_jobs(job, list(seeds))

    rows = []
    for seed, (_, _, rep) in zip(seeds, pairs):
        rows.append(
            {
                "seed": seed,
                "parametric_fnd": rep.parametric.fnd_round,
                "parametric_hnd": rep.parametric.hnd_round,
                "parametric_lnd": rep.parametric.lnd_round,
                "parametric_energy_j": rep.parametric.total_energy_j,
                "parametric_bits_per_joule": rep.parametric_bits_per_joule,
                "baseline_fnd": rep.baseline.fnd_round,
                "baseline_hnd": rep.baseline.hnd_round,
                "baseline_lnd": rep.baseline.lnd_round,
                "baseline_energy_j": rep.baseline.total_energy_j,
                "baseline_bits_per_joule": rep.baseline_bits_per_joule,
                "fnd_delta": rep.fnd_delta,
                "hnd_delta": rep.hnd_delta,
                "lnd_delta": rep.lnd_delta,
                "energy_delta": rep.energy_delta,
                "delivered_delta": rep.delivered_delta,
            }
        )
    median_row = {"seed": "median"}
    for col in _COMPARE_COLUMNS[1:]:
        median_row[col] = _median([row[col] for row in rows])

    table_path = out_dir / "comparison.csv"
    with open(table_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(_COMPARE_COLUMNS)
        for row in rows + [median_row]:
            writer.writerow([_cell(row[col]) for col in _COMPARE_COLUMNS])
    print(table_path)

    summary = {
        "seeds": list(seeds),
        "median": {col: median_row[col] for col in _COMPARE_COLUMNS[1:]},
        "per_seed": [
            comparison_dict(rep, seed) for seed, (_, _, rep) in zip(seeds, pairs)
        ],
    }
    json_path = out_dir / "comparison.json"
    with open(json_path, "w", newline="") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    print(json_path)

    fig_path = out_dir / "comparison.png"
    plots.plot_comparison(pairs[0][0], pairs[0][1], fig_path)
    print(fig_path)
    return 0


def _sweep_scenario(scn: Scenario, param: str, value: float) -> Scenario:
    """Return a copy of the scenario with one parameter overridden."""
    if param == "threshold":
        scn = dataclasses.replace(
            scn, params=dataclasses.replace(scn.params, threshold=value)
        )
    elif param == "alpha":
        scn = dataclasses.replace(
            scn, params=dataclasses.replace(scn.params, alpha=value)
        )
    elif param == "drift_sigma":
        scn = dataclasses.replace(
            scn, config=dataclasses.replace(scn.config, drift_sigma=value)
        )
    elif param == "localization_interval":
        if value != int(value):
            raise ConfigurationError(
                f"localization_interval must be an integer (got {value})"
            )
        scn = dataclasses.replace(
            scn, config=dataclasses.replace(scn.config, localization_interval=int(value))
        )
    elif param == "congestion_delta":
        if value < 0:
            raise ConfigurationError(f"congestion_delta must be >= 0 (got {value})")
        scn = dataclasses.replace(scn, congestion_delta=value)
    elif param == "congestion_decay":
        if not 0.0 <= value <= 1.0:
            raise ConfigurationError(f"congestion_decay must be in [0, 1] (got {value})")
        scn = dataclasses.replace(scn, congestion_decay=value)
    else:
        raise ConfigurationError(
            f"--param must be one of {', '.join(SWEEPABLE)} (got {param!r})"
        )
    scn.config.validate(prefix="network.")
    scn.params.validate(prefix="energy.")
    return scn


_SWEEP_COLUMNS = (
    "param",
    "value",
    "seed",
    "mode",
    "fnd_round",
    "hnd_round",
    "lnd_round",
    "total_energy_j",
    "total_delivered_bits",
    "total_long_links",
    "rounds_executed",
)


def cmd_sweep(
    scn: Scenario,
    param: str,
    values: list[float],
    seeds: tuple[int, ...],
    out_dir: Path,
) -> int:
    # Validate every value up front so a bad one fails before any work runs.
    variants = [(_sweep_scenario(scn, param, v), v) for v in values]
    out_dir.mkdir(parents=True, exist_ok=True)

    jobs = [(variant, v, seed) for variant, v in variants for seed in seeds]
    results = _run_jobs(lambda job: _run_one(job[0], job[2]), jobs)

    table_path = out_dir / "sweep.csv"
    with open(table_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(_SWEEP_COLUMNS)
        for (variant, value, seed), result in zip(jobs, results):
            m = compute_lifetime(result.reports, result.config.n)
            writer.writerow(
                [
                    param,
                    _cell(value),
                    seed,
                    result.mode,
                    _cell(m.fnd_round),
                    _cell(m.hnd_round),
                    _cell(m.lnd_round),
                    repr(m.total_energy_j),
                    m.total_delivered_bits,
                    m.total_long_links,
                    m.rounds_executed,
                ]
            )
    print(table_path)

    per_value = []
    k = len(seeds)
    for i, value in enumerate(values):
        chunk = results[i * k : (i + 1) * k]
        per_value.append(
            _median([compute_lifetime(r.reports, r.config.n).fnd_round for r in chunk])
        )
    fig_path = out_dir / "sweep.png"
    plots.plot_sweep(param, values, {scn.mode: per_value}, fig_path)
    print(fig_path)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="aquachain",
        description="Chain-based routing simulator for underwater sensor networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("scenario", help="scenario YAML file")
        p.add_argument(
            "--seeds",
            type=int,
            nargs="+",
            metavar="S",
            help="override the scenario's seed list",
        )
        p.add_argument(
            "--out-dir",
            default=".",
            help="directory for output artifacts (default: current directory)",
        )

    p_run = sub.add_parser("run", help="run the scenario and export round data")
    add_common(p_run)
    p_trace = sub.add_parser("trace", help="run and also export the chain/leader trace")
    add_common(p_trace)
    p_cmp = sub.add_parser("compare", help="run parametric vs baseline on each seed")
    add_common(p_cmp)
    p_sweep = sub.add_parser("sweep", help="re-run the scenario across parameter values")
    add_common(p_sweep)
    p_sweep.add_argument("--param", required=True, help=f"one of: {', '.join(SWEEPABLE)}")
    p_sweep.add_argument(
        "--values", type=float, nargs="+", required=True, metavar="V", help="values to sweep"
    )

    args = parser.parse_args(argv)
    try:
        scn = load_scenario(args.scenario)
        seeds = tuple(args.seeds) if args.seeds else scn.seeds
        out_dir = Path(args.out_dir)
        if args.command == "run":
            return cmd_run(scn, seeds, out_dir)
        if args.command == "trace":
            return cmd_run(scn, seeds, out_dir, with_trace=True)
        if args.command == "compare":
            return cmd_compare(scn, seeds, out_dir)
        return cmd_sweep(scn, args.param, args.values, seeds, out_dir)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ComparisonError, ProtocolError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
