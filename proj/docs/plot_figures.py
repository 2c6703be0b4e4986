"""Plot the CSV files written by `reachctl emit-figure-data`.

Usage: python docs/plot_figures.py OUT_DIR [PREFIX]
Writes PREFIX_stepsizes.png, PREFIX_sigma.png and PREFIX_delta_cost.png.
"""

import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402


def main(out_dir: Path, prefix: str) -> None:
    steps = pd.read_csv(out_dir / "stepsizes.csv")
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for name, group in steps.groupby("algorithm"):
        ax.step(group["t_j"], group["h_j"], where="pre", label=name)
    ax.set_yscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel("h")
    ax.legend()
    fig.tight_layout()
    fig.savefig(f"{prefix}_stepsizes.png", dpi=150)

    sigma = pd.read_csv(out_dir / "sigma.csv")
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for name, group in sigma.groupby("algorithm"):
        ax.plot(group["t_i"], group["sigma_E"], label=f"{name} error")
        ax.plot(group["t_i"], group["sigma_C"], "--", label=f"{name} cost")
    ax.set_xlabel("t")
    ax.legend()
    fig.tight_layout()
    fig.savefig(f"{prefix}_sigma.png", dpi=150)

    delta = pd.read_csv(out_dir / "delta_cost.csv")
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.loglog(delta["E"], delta["delta_C"], "o-")
    ax.invert_xaxis()
    ax.set_xlabel("E")
    ax.set_ylabel("relative cost estimator error")
    fig.tight_layout()
    fig.savefig(f"{prefix}_delta_cost.png", dpi=150)


if __name__ == "__main__":
    if len(sys.argv) < 2:
        sys.exit(__doc__)
    main(Path(sys.argv[1]), sys.argv[2] if len(sys.argv) > 2 else "figure")
