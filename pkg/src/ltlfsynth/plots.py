"""Figures summarising a benchmark run, rendered straight to files."""

from __future__ import annotations

import os
from statistics import median
from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .bench import BenchRow

__all__ = ["render_report"]

_VERDICTS = ("REALIZABLE", "UNREALIZABLE", "TIMEOUT", "ERROR")


def _by_engine(rows: Sequence[BenchRow]) -> dict[str, list[BenchRow]]:
    out: dict[str, list[BenchRow]] = {}
    for r in rows:
        out.setdefault(r.engine, []).append(r)
    return out


def _completion_figure(rows: Sequence[BenchRow], path: str) -> None:
    engines = sorted(_by_engine(rows))
    fig, ax = plt.subplots(figsize=(6, 4))
    width = 0.8 / max(1, len(_VERDICTS))
    for k, verdict in enumerate(_VERDICTS):
        counts = [
            sum(1 for r in rows if r.engine == e and r.verdict == verdict)
            for e in engines
        ]
        xs = [i + k * width for i in range(len(engines))]
        ax.bar(xs, counts, width=width, label=verdict.lower())
    ax.set_xticks([i + 1.5 * width for i in range(len(engines))])
    ax.set_xticklabels(engines)
    ax.set_ylabel("runs")
    ax.set_title("verdicts per engine")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _scatter_figure(rows: Sequence[BenchRow], path: str) -> None:
    """Per-instance solve time, one engine per axis, on log scales."""
    solved: dict[str, dict[str, float]] = {}
    for r in rows:
        if r.solve_ms is not None:
            solved.setdefault(r.name, {})[r.engine] = r.solve_ms
    pairs = [
        (v["explicit"], v["symbolic"])
        for v in solved.values()
        if "explicit" in v and "symbolic" in v
    ]
    fig, ax = plt.subplots(figsize=(5, 5))
    if pairs:
        xs, ys = zip(*pairs)
        # Log axes cannot show a measured zero; clamp to a visible floor.
        floor = 1e-3
        xs = [max(v, floor) for v in xs]
        ys = [max(v, floor) for v in ys]
        ax.scatter(xs, ys, alpha=0.7)
        lo, hi = min(xs + ys), max(xs + ys)
        ax.plot([lo, hi], [lo, hi], linestyle="--", linewidth=1)
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.set_xlabel("explicit solve ms")
    ax.set_ylabel("symbolic solve ms")
    ax.set_title("solve time per instance")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _phase_figure(rows: Sequence[BenchRow], path: str) -> None:
    """Median time in each phase, stacked per engine."""
    engines = sorted(_by_engine(rows))
    dfa_meds, solve_meds = [], []
    for e in engines:
        done = [r for r in rows if r.engine == e and r.total_ms is not None]
        dfa_meds.append(median(r.dfa_ms for r in done) if done else 0.0)
        solve_meds.append(median(r.solve_ms for r in done) if done else 0.0)
    fig, ax = plt.subplots(figsize=(5, 4))
    xs = range(len(engines))
    ax.bar(xs, dfa_meds, label="automaton")
    ax.bar(xs, solve_meds, bottom=dfa_meds, label="game + strategy")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(engines)
    ax.set_ylabel("median ms")
    ax.set_title("where the time goes")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def render_report(rows: Iterable[BenchRow], outdir) -> list[str]:
    """Write the three summary figures; returns the file paths."""
    rows = list(rows)
    os.makedirs(outdir, exist_ok=True)
    paths = []
    for name, fn in (
        ("completion.png", _completion_figure),
        ("solve_scatter.png", _scatter_figure),
        ("phase_split.png", _phase_figure),
    ):
        path = os.path.join(str(outdir), name)
        fn(rows, path)
        paths.append(path)
    return paths
