"""File outputs for sweep reports: a delimited summary and a histogram.

The CSV holds the exact envy distribution (one row per distinct worst
value); the PNG is the same distribution drawn as a bar chart.  Rendering
uses the Agg backend so it works headless.
"""

import csv
from pathlib import Path

from .search import SearchReport


def write_search_outputs(report: SearchReport, out_dir: str | Path) -> tuple[Path, Path]:
    """Write ``<check>.csv`` and ``<check>.png`` under ``out_dir``.

    Returns the two paths.  The directory is created if missing.
    """
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    csv_path = directory / f"{report.check}.csv"
    png_path = directory / f"{report.check}.png"

    with csv_path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["max_envy", "profiles"])
        for value, count in report.minimax_summary:
            writer.writerow([str(value), count])

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    labels = [str(value) for value, _ in report.minimax_summary]
    counts = [count for _, count in report.minimax_summary]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(range(len(counts)), counts, color="#4878a8")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels)
    ax.set_xlabel("worst envy probability")
    ax.set_ylabel("profiles")
    ax.set_title(
        f"{report.check}: {report.profiles_examined} profiles, "
        f"{len(report.failures)} failures"
    )
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return csv_path, png_path
