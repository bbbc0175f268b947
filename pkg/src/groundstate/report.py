"""Figure and delimited-summary rendering for workflow results.

Given a workflow result document, writes a ``summary.csv`` plus matplotlib
figures (phase/round histograms, trial-state weights, per-group
statistics) into a report directory.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def _write_summary_csv(document: dict, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["stage", "key", "value"])
        for stage, record in document.get("stages", {}).items():
            writer.writerow([stage, "impl", record.get("impl", "")])
            for key, value in sorted(record.get("summary", {}).items()):
                if isinstance(value, (list, dict)):
                    continue
                writer.writerow([stage, key, value])
        result = document.get("result", {})
        for key in ("raw_energy", "phase", "bits", "energy", "variance", "classical_offset"):
            if key in result:
                writer.writerow(["result", key, result[key]])
        writer.writerow(["run", "seed", document.get("seed", "")])


def _plot_standard_histogram(histogram: dict, path: Path) -> None:
    keys = sorted(histogram)
    values = [histogram[k] for k in keys]
    fig, ax = plt.subplots(figsize=(max(4.0, 0.5 * len(keys)), 3.2))
    ax.bar(range(len(keys)), values, color="#3b6ea5")
    ax.set_xticks(range(len(keys)))
    ax.set_xticklabels(keys, rotation=90, fontsize=7)
    ax.set_xlabel("ancilla bitstring")
    ax.set_ylabel("shots")
    ax.set_title("phase readout histogram")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _plot_iterative_rounds(rounds: list, path: Path) -> None:
    labels = [f"k={entry['round']}" for entry in rounds]
    zeros = [entry["counts"].get("0", 0) for entry in rounds]
    ones = [entry["counts"].get("1", 0) for entry in rounds]
    x = range(len(rounds))
    fig, ax = plt.subplots(figsize=(max(4.0, 0.7 * len(rounds)), 3.2))
    ax.bar(x, zeros, label="outcome 0", color="#b0b7c0")
    ax.bar(x, ones, bottom=zeros, label="outcome 1", color="#3b6ea5")
    for position, entry in zip(x, rounds):
        ax.annotate(
            str(entry["bit"]),
            (position, entry["counts"].get("0", 0) + entry["counts"].get("1", 0)),
            ha="center",
            va="bottom",
            fontsize=8,
        )
    ax.set_xticks(list(x))
    ax.set_xticklabels(labels)
    ax.set_xlabel("round (bit index, LSB first)")
    ax.set_ylabel("shots")
    ax.set_title("iterative phase estimation rounds")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _plot_trial_weights(summary: dict, path: Path) -> None:
    weights = summary.get("coefficients")
    if not weights:
        return
    fig, ax = plt.subplots(figsize=(4.2, 3.2))
    ax.bar(range(len(weights)), [abs(c) for c in weights], color="#3b6ea5")
    ax.set_xlabel("determinant (sorted by weight)")
    ax.set_ylabel("|coefficient|")
    ax.set_title("trial-state determinant weights")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _plot_group_statistics(groups: list, path: Path) -> None:
    means = [g["mean"] for g in groups]
    spreads = [g["variance"] ** 0.5 for g in groups]
    fig, ax = plt.subplots(figsize=(max(4.0, 0.6 * len(groups)), 3.2))
    ax.errorbar(range(len(groups)), means, yerr=spreads, fmt="o", capsize=3)
    ax.set_xticks(range(len(groups)))
    ax.set_xticklabels([g["basis"] for g in groups], rotation=45, fontsize=7)
    ax.set_xlabel("measurement group basis")
    ax.set_ylabel("group mean (Hartree)")
    ax.set_title("per-group contributions")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_report(document: dict, directory) -> list[Path]:
    """Write summary.csv plus figures; returns the created paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []

    csv_path = directory / "summary.csv"
    _write_summary_csv(document, csv_path)
    written.append(csv_path)

    result = document.get("result", {})
    histogram = result.get("histogram")
    if isinstance(histogram, dict) and histogram:
        target = directory / "phase_histogram.png"
        _plot_standard_histogram(histogram, target)
        written.append(target)
    elif isinstance(histogram, list) and histogram:
        target = directory / "iterative_rounds.png"
        _plot_iterative_rounds(histogram, target)
        written.append(target)

    trial_summary = document.get("stages", {}).get("truncate", {}).get("summary", {})
    if not trial_summary.get("coefficients"):
        trial_summary = document.get("stages", {}).get("casci", {}).get("summary", {})
    if trial_summary.get("coefficients"):
        target = directory / "trial_weights.png"
        _plot_trial_weights(trial_summary, target)
        written.append(target)

    groups = result.get("group_statistics")
    if groups:
        target = directory / "group_statistics.png"
        _plot_group_statistics(groups, target)
        written.append(target)
    return written
