"""Rendering of iteration traces: delimited output plus convergence figures."""

from __future__ import annotations

import csv
import json
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_COLUMNS = ["iter", "f_norm", "dx_norm", "b0", "dx0", "x0"]


def _flatten(value) -> str:
    # complex probe entries arrive as [re, im] string pairs
    if isinstance(value, list):
        return f"({value[0]},{value[1]})"
    return str(value)


def load_trace(path: str) -> list:
    """Read iteration records from a JSON-lines trace file."""
    records = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(json.loads(line))
    return [r for r in records if "iter" in r]


def write_csv(records: list, path: str):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_COLUMNS)
        for rec in records:
            writer.writerow([_flatten(rec[c]) for c in _COLUMNS])


def write_convergence_figure(records: list, path: str, title: str = ""):
    """Semilog plot of residual and correction norms per iteration."""
    iters = [rec["iter"] for rec in records]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.semilogy(iters, [rec["f_norm"] for rec in records], "o-",
                label=r"$\|f(x_k)\|_\infty$")
    ax.semilogy(iters, [rec["dx_norm"] for rec in records], "s--",
                label=r"$\|\Delta x_k\|_\infty$")
    ax.set_xlabel("iteration")
    ax.set_ylabel("norm")
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_report(records: list, out_dir: str, title: str = "") -> dict:
    """CSV and PNG side by side in out_dir; returns the paths written."""
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, "trace.csv")
    png_path = os.path.join(out_dir, "convergence.png")
    write_csv(records, csv_path)
    write_convergence_figure(records, png_path, title)
    return {"csv": csv_path, "figure": png_path}
