"""Plots energy curves written by `tfdw curve`, with the free curve of the same constants for comparison.

Usage:
    tfdw --config atom.json curve
    tfdw --config atom.json --set potential.type=none curve
    python plot_curve.py results/curve-<hash>.csv results/curve-<free hash>.csv
"""

import argparse

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd


parser = argparse.ArgumentParser(description="plot tfdw energy curves")
parser.add_argument("curves", nargs="+", help="curve CSV files")
parser.add_argument("--per-mass", action="store_true", help="plot I(m)/m instead of I(m)")
parser.add_argument("-o", "--output", default="curve.png")
args = parser.parse_args()

plt.rc('font', size=10)
plt.rc('axes', titlesize=18)
plt.rc('axes', labelsize=15)
plt.rc('xtick', labelsize=15)
plt.rc('ytick', labelsize=15)
plt.rc('legend', fontsize=13)

fig = plt.figure(figsize=(8, 5))
ax = fig.subplots()

for filename in args.curves:
    data = pd.read_csv(filename)
    m = np.concatenate([[0.0], data["m"]])
    energy = np.concatenate([[0.0], data["energy"]])
    if args.per_mass:
        m, energy = m[1:], energy[1:] / m[1:]
    ax.plot(m, energy, marker='o', label=filename.rsplit("/", 1)[-1])
    unconverged = ~data["converged"].astype(bool)
    if unconverged.any():
        ax.scatter(data["m"][unconverged], (data["energy"] / (data["m"] if args.per_mass else 1))[unconverged],
                   color='red', zorder=3, label="not converged")

ax.set_title("Constrained minimum energy")
ax.set_xlabel("Mass $m$")
ax.set_ylabel("$I(m)/m$" if args.per_mass else "$I(m)$")
ax.legend()
fig.tight_layout()
plt.savefig(args.output)
plt.show()
