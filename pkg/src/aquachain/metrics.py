"""Lifetime metrics and result export.

Lifetime is summarized by the usual three landmarks: first node death
(FND), half nodes dead (HND), last node dead (LND), given as round
numbers or None when the run ended before reaching them. Exporters build
CSV/JSON text with a fixed column and key order and repr-formatted
floats, so identical results produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Sequence

from .engine import RoundReport, SimResult, TraceEntry
from .errors import ComparisonError


@dataclass(frozen=True, slots=True)
class LifetimeMetrics:
    fnd_round: int | None
    hnd_round: int | None
    lnd_round: int | None
    total_energy_j: float
    total_delivered_bits: int
    total_long_links: int
    rounds_executed: int


def compute_lifetime(series: Sequence[RoundReport], n: int) -> LifetimeMetrics:
    """Scan a round series once and pull out the lifetime landmarks.

    HND triggers when cumulative deaths first reach ceil(n/2), so in odd
    networks the majority must be gone. Landmarks are the round numbers
    of the reports in which the thresholds are crossed; an empty series
    yields all-None landmarks and zero totals.
    """
    half = math.ceil(n / 2)
    fnd = hnd = lnd = None
    dead = 0
    energy = 0.0
    bits = 0
    links = 0
    for report in series:
        energy += report.energy_spent
        bits += report.delivered_bits
        links += report.long_link_events
        if report.deaths:
            dead += len(report.deaths)
            if fnd is None:
                fnd = report.round
            if hnd is None and dead >= half:
                hnd = report.round
            if lnd is None and dead >= n:
                lnd = report.round
    return LifetimeMetrics(
        fnd_round=fnd,
        hnd_round=hnd,
        lnd_round=lnd,
        total_energy_j=energy,
        total_delivered_bits=bits,
        total_long_links=links,
        rounds_executed=len(series),
    )


def bits_per_joule(metrics: LifetimeMetrics) -> float:
    """Delivered bits per joule spent; 0.0 for a run that spent nothing."""
    if metrics.total_energy_j <= 0.0:
        return 0.0
    return metrics.total_delivered_bits / metrics.total_energy_j


@dataclass(frozen=True, slots=True)
class ComparisonReport:
    """Side-by-side lifetime of two runs over the same spawned network."""

    parametric: LifetimeMetrics
    baseline: LifetimeMetrics
    fnd_delta: int | None
    hnd_delta: int | None
    lnd_delta: int | None
    energy_delta: float
    delivered_delta: int
    parametric_bits_per_joule: float
    baseline_bits_per_joule: float


def _delta(a: int | None, b: int | None) -> int | None:
    if a is None or b is None:
        return None
    return a - b


def compare(parametric: SimResult, baseline: SimResult) -> ComparisonReport:
    """Compare two runs that started from the identical network.

    Deltas are parametric minus baseline, so positive lifetime deltas mean
    the parametric run kept nodes alive longer. Comparing runs built from
    different configs, seeds or energy parameters is refused outright
    rather than producing a number that looks meaningful.
    """
    if parametric.config != baseline.config:
        raise ComparisonError("results come from different network configurations")
    if parametric.seed != baseline.seed:
        raise ComparisonError(
            f"results come from different seeds ({parametric.seed} vs {baseline.seed})"
        )
    if parametric.params != baseline.params:
        raise ComparisonError("results come from different energy parameters")
    pm = compute_lifetime(parametric.reports, parametric.config.n)
    bm = compute_lifetime(baseline.reports, baseline.config.n)
    return ComparisonReport(
        parametric=pm,
        baseline=bm,
        fnd_delta=_delta(pm.fnd_round, bm.fnd_round),
        hnd_delta=_delta(pm.hnd_round, bm.hnd_round),
        lnd_delta=_delta(pm.lnd_round, bm.lnd_round),
        energy_delta=pm.total_energy_j - bm.total_energy_j,
        delivered_delta=pm.total_delivered_bits - bm.total_delivered_bits,
        parametric_bits_per_joule=bits_per_joule(pm),
        baseline_bits_per_joule=bits_per_joule(bm),
    )


ROUNDS_COLUMNS = (
    "round",
    "leader",
    "energy_spent",
    "alive_count",
    "delivered_bits",
    "long_link_events",
    "deaths",
)


def _write_text(text: str, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(text)


def export_rounds(series: Sequence[RoundReport], path=None) -> str:
    """Render the per-round series as CSV text (and write it if path given).

    Floats go through repr for shortest round-trip text; the deaths column
    packs the ids that died that round with ';' (empty when none).
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ROUNDS_COLUMNS)
    for report in series:
        writer.writerow(
            [
                report.round,
                report.leader,
                repr(report.energy_spent),
                report.alive_count,
                report.delivered_bits,
                report.long_link_events,
                ";".join(str(d) for d in report.deaths),
            ]
        )
    text = buf.getvalue()
    if path is not None:
        _write_text(text, path)
    return text


def summary_dict(metrics: LifetimeMetrics, seed: int, mode: str) -> dict:
    """The summary in its canonical key order."""
    return {
        "fnd_round": metrics.fnd_round,
        "hnd_round": metrics.hnd_round,
        "lnd_round": metrics.lnd_round,
        "total_energy_j": metrics.total_energy_j,
        "total_delivered_bits": metrics.total_delivered_bits,
        "total_long_links": metrics.total_long_links,
        "rounds_executed": metrics.rounds_executed,
        "seed": seed,
        "mode": mode,
    }


def export_summary(metrics: LifetimeMetrics, seed: int, mode: str, path=None) -> str:
    """Render the lifetime summary as JSON text with a fixed key order."""
    text = json.dumps(summary_dict(metrics, seed, mode), indent=2) + "\n"
    if path is not None:
        _write_text(text, path)
    return text


def export_trace(trace: Sequence[TraceEntry], path=None) -> str:
    """Render the per-round chain/leader trace as a JSON array."""
    entries = [
        {"round": t.round, "chain": list(t.chain), "leader": t.leader} for t in trace
    ]
    text = json.dumps(entries, indent=2) + "\n"
    if path is not None:
        _write_text(text, path)
    return text


def comparison_dict(report: ComparisonReport, seed: int) -> dict:
    """Comparison report as plain data, ready for JSON."""
    return {
        "seed": seed,
        "parametric": summary_dict(report.parametric, seed, "parametric")
        | {"bits_per_joule": report.parametric_bits_per_joule},
        "baseline": summary_dict(report.baseline, seed, "baseline")
        | {"bits_per_joule": report.baseline_bits_per_joule},
        "fnd_delta": report.fnd_delta,
        "hnd_delta": report.hnd_delta,
        "lnd_delta": report.lnd_delta,
        "energy_delta": report.energy_delta,
        "delivered_delta": report.delivered_delta,
    }
