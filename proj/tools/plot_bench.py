#!/usr/bin/env python3
"""Plot `zxdb bench` CSV output: mean fixpoint time against node count.

Usage: plot_bench.py bench.csv [more.csv ...] [-o plot.png]
"""

import argparse
import csv
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def load(paths):
    series = defaultdict(list)
    for path in paths:
        with open(path, newline="") as f:
            for row in csv.DictReader(f):
                series[row["rule"]].append(
                    (int(row["nodes"]), float(row["mean_s"]), float(row["stddev_s"]))
                )
    return series


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("csv", nargs="+")
    parser.add_argument("-o", "--out", default="bench.png")
    args = parser.parse_args()

    fig, ax = plt.subplots(figsize=(6, 4))
    for rule, points in sorted(load(args.csv).items()):
        points.sort()
        nodes, mean, std = zip(*points)
        ax.errorbar(nodes, mean, yerr=std, marker="o", capsize=3, label=rule)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("Node count")
    ax.set_ylabel("Average time (s)")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)


if __name__ == "__main__":
    main()
