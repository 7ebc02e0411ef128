"""Figure rendering for the command-line reports.

Everything here draws from finished results onto PNG files via the Agg
backend, so runs work headless. Numeric exports never depend on this
module; figures are a convenience layered on top.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .engine import SimResult


def plot_lifetime(result: SimResult, path) -> None:
    """Alive population and cumulative energy spend over the run."""
    rounds = [r.round for r in result.reports]
    alive = [r.alive_count for r in result.reports]
    spent = []
    total = 0.0
    for r in result.reports:
        total += r.energy_spent
        spent.append(total)

    fig, ax = plt.subplots(figsize=(7, 4))
    ax.step(rounds, alive, where="post", color="tab:blue", label="alive nodes")
    ax.set_xlabel("round")
    ax.set_ylabel("alive nodes", color="tab:blue")
    ax.set_ylim(bottom=0)
    ax2 = ax.twinx()
    ax2.plot(rounds, spent, color="tab:red", alpha=0.7, label="energy spent")
    ax2.set_ylabel("cumulative energy (J)", color="tab:red")
    ax.set_title(f"{result.mode} run, n={result.config.n}, seed={result.seed}")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_comparison(parametric: SimResult, baseline: SimResult, path) -> None:
    """Alive population per round for both modes on one axes."""
    fig, ax = plt.subplots(figsize=(7, 4))
    for result, color in ((parametric, "tab:blue"), (baseline, "tab:orange")):
        ax.step(
            [r.round for r in result.reports],
            [r.alive_count for r in result.reports],
            where="post",
            color=color,
            label=result.mode,
        )
    ax.set_xlabel("round")
    ax.set_ylabel("alive nodes")
    ax.set_ylim(bottom=0)
    ax.legend()
    ax.set_title(f"n={parametric.config.n}, seed={parametric.seed}")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_sweep(param: str, values: list[float], series: dict[str, list[float | None]], path) -> None:
    """Median first-death round against a swept parameter, one line per mode."""
    fig, ax = plt.subplots(figsize=(7, 4))
    for mode, ys in series.items():
        pts = [math.nan if y is None else y for y in ys]
        ax.plot(values, pts, marker="o", label=mode)
    ax.set_xlabel(param)
    ax.set_ylabel("median FND round")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
