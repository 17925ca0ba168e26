"""Figure rendering for sweep results and latency reports.

Figures are written straight to files; no interactive backend is
required or used.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def save_sweep_figure(rows, path):
    """Render BER and FER curves from sweep result rows to an image file.

    Rows are grouped by config_name; zero rates are left off the log
    axes.  Returns the path written.
    """
    names = []
    for row in rows:
        if row["config_name"] not in names:
            names.append(row["config_name"])
    fig, (ax_ber, ax_fer) = plt.subplots(1, 2, figsize=(9.5, 4.0), sharex=True)
    for name in names:
        pts = sorted(
            (r for r in rows if r["config_name"] == name),
            key=lambda r: float(r["ebn0_db"]),
        )
        snr = np.array([float(r["ebn0_db"]) for r in pts])
        for ax, key in ((ax_ber, "ber"), (ax_fer, "fer")):
            vals = np.array([float(r[key]) for r in pts])
            keep = vals > 0
            if keep.any():
                ax.semilogy(snr[keep], vals[keep], marker="o", label=name)
    n, k = rows[0]["N"], rows[0]["K"]
    for ax, ylabel in ((ax_ber, "BER"), (ax_fer, "FER")):
        ax.set_xlabel("Eb/N0 (dB)")
        ax.set_ylabel(ylabel)
        ax.grid(True, which="both", alpha=0.3)
        ax.legend(fontsize=8)
    fig.suptitle(f"polar({n},{k})")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_latency_figure(report, path):
    """Render decode step counts per configuration as a bar chart."""
    rows = report["rows"]
    labels = [r["config"] for r in rows]
    steps = [r["steps"] for r in rows]
    fig, ax = plt.subplots(figsize=(1.4 + 1.2 * len(rows), 4.0))
    bars = ax.bar(range(len(rows)), steps, color="#4878cf")
    ax.set_xticks(range(len(rows)))
    ax.set_xticklabels(labels, rotation=20, ha="right", fontsize=8)
    ax.set_ylabel("time steps")
    ax.set_title(f"polar({report['N']},{report['K']}) decode latency")
    for bar, row in zip(bars, rows):
        ax.annotate(
            str(row["steps"]),
            (bar.get_x() + bar.get_width() / 2, bar.get_height()),
            ha="center",
            va="bottom",
            fontsize=8,
        )
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
