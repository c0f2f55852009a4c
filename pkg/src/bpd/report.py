"""Benchmark output: delimited table plus a rendered figure.

The branching-factor base 1.8393 comes from the search tree analysis of
the branching rules; the bench report contextualizes measured node
counts against it but never asserts it, since it is an asymptotic
worst-case constant.
"""

from __future__ import annotations

import csv
import os

BRANCHING_BASE = 1.8393

FIELDS = ("name", "n", "m", "optimum", "nodes_expanded", "time_ms", "bound_1_8393")


def bench_row(name: str, n: int, m: int, optimum: int, nodes: int,
              time_ms: float) -> dict:
    return {
        "name": name,
        "n": n,
        "m": m,
        "optimum": optimum,
        "nodes_expanded": nodes,
        "time_ms": round(time_ms, 3),
        "bound_1_8393": round(BRANCHING_BASE ** optimum, 3),
    }


def write_bench_csv(rows: list[dict], path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=FIELDS)
        writer.writeheader()
        writer.writerows({k: row[k] for k in FIELDS} for row in rows)


def render_bench_png(rows: list[dict], path: str) -> None:
    """Scatter of measured nodes against the reference growth curve."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ks = [row["optimum"] for row in rows]
    nodes = [max(row["nodes_expanded"], 1) for row in rows]
    fig, ax = plt.subplots(figsize=(7, 5))
    ax.scatter(ks, nodes, label="measured nodes", color="tab:blue", zorder=3)
    if ks:
        span = range(min(ks), max(ks) + 1)
        ax.plot(span, [BRANCHING_BASE ** k for k in span],
                label=f"{BRANCHING_BASE}^k reference", color="tab:red", linestyle="--")
    ax.set_yscale("log")
    ax.set_xlabel("optimum (k)")
    ax.set_ylabel("search nodes")
    ax.set_title("branching solver: nodes vs budget")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_bench_outputs(rows: list[dict], out_dir: str) -> dict:
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, "bench.csv")
    png_path = os.path.join(out_dir, "bench.png")
    write_bench_csv(rows, csv_path)
    render_bench_png(rows, png_path)
    return {"csv": csv_path, "png": png_path}
