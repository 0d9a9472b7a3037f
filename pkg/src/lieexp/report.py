"""Report files for saturation runs: JSON, a tab-separated table and a coverage figure."""

from __future__ import annotations

import csv
import os
from fractions import Fraction

from .serialize import dumps

TSV_COLUMNS = ["seed_index", "round", "coverage", "reached", "window_size", "evaluated",
               "discarded", "fixed_point", "round_limit_hit"]


def _rows(reports):
    for i, rep in enumerate(reports):
        for rnd, cov in enumerate(rep.coverage_by_round):
            yield {
                "seed_index": i,
                "round": rnd,
                "coverage": str(cov),
                "reached": int(cov * rep.window_size),
                "window_size": rep.window_size,
                "evaluated": rep.evaluated,
                "discarded": rep.discarded,
                "fixed_point": int(rep.fixed_point),
                "round_limit_hit": int(rep.round_limit_hit),
            }


def write_tsv(path, reports):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=TSV_COLUMNS, delimiter="\t", lineterminator="\n")
        writer.writeheader()
        for row in _rows(reports):
            writer.writerow(row)


def plot_coverage(path, reports, title=""):
    """Coverage against round, one line per seed, saved as a PNG."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.2))
    for i, rep in enumerate(reports):
        ys = [float(Fraction(c)) for c in rep.coverage_by_round]
        ax.plot(range(len(ys)), ys, marker="o", ms=2.5, lw=0.8, alpha=0.8, label=f"seed {i}")
    ax.set_xlabel("round")
    ax.set_ylabel("coverage")
    ax.set_ylim(-0.05, 1.05)
    ax.axhline(1.0, color="k", lw=0.5, ls=":")
    if title:
        ax.set_title(title, fontsize=9)
    if len(reports) <= 8:
        ax.legend(fontsize=6, frameon=False)
    fig.tight_layout()
    # fixed metadata keeps the file byte-identical across runs
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)


def write_report(directory, doc: dict, reports, title="") -> dict:
    """Write ``report.json``, ``coverage.tsv`` and ``coverage.png`` into ``directory``."""
    os.makedirs(directory, exist_ok=True)
    paths = {
        "json": os.path.join(directory, "report.json"),
        "tsv": os.path.join(directory, "coverage.tsv"),
        "png": os.path.join(directory, "coverage.png"),
    }
    with open(paths["json"], "w", encoding="utf-8") as fh:
        fh.write(dumps(doc))
    write_tsv(paths["tsv"], reports)
    plot_coverage(paths["png"], reports, title)
    return paths
