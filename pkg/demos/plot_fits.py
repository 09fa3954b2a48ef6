"""Plot the fitted densities over a histogram and the fitted cdfs over the
empirical cdf, from the CSV files written by ``gmokw plotdata``.

    gmokw plotdata --data bundled --out-dir plots
    python demos/plot_fits.py plots

Needs matplotlib, which the package itself does not depend on.
"""

import csv
import sys
from pathlib import Path

import matplotlib.pyplot as plt
import numpy as np


def read(path):
    with open(path) as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)


def main(folder="."):
    folder = Path(folder)
    fig, axes = plt.subplots(1, 2, figsize=(11, 4))
    for ax, name, step in ((axes[0], "histogram.csv", None), (axes[1], "cdf.csv", "post")):
        header, table = read(folder / name)
        t = table[:, 0]
        ax.fill_between(t, table[:, 1], step=step, alpha=0.25, color="grey", label="empirical")
        for j, label in enumerate(header[2:], start=2):
            ax.plot(t, table[:, j], label=label)
        ax.set_xlabel("t")
    axes[0].set_ylabel("density")
    axes[1].set_ylabel("cdf")
    axes[1].legend(frameon=False)
    fig.tight_layout()
    fig.savefig(folder / "fits.png", dpi=150)
    print(folder / "fits.png")


if __name__ == "__main__":
    main(*sys.argv[1:])
