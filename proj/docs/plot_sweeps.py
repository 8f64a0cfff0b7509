#!/usr/bin/env python3
"""Plot columns of a sweep CSV: plot_sweeps.py <file.csv> [output-prefix]"""
import csv
import math
import sys

import matplotlib.pyplot as plt


def main() -> None:
    if len(sys.argv) < 2:
        sys.exit(__doc__)
    path = sys.argv[1]
    prefix = sys.argv[2] if len(sys.argv) > 2 else ""

    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, data = rows[0], rows[1:]
    axis = [float(r[0]) for r in data]

    for col in range(1, len(header)):
        if prefix and not header[col].startswith(prefix):
            continue
        ys = [float(r[col]) for r in data]
        xs = [x for x, y in zip(axis, ys) if not math.isnan(y)]
        ys = [y for y in ys if not math.isnan(y)]
        plt.plot(xs, ys, label=header[col])

    plt.xlabel(header[0])
    plt.legend()
    plt.tight_layout()
    out = path.rsplit(".", 1)[0] + ".png"
    plt.savefig(out, dpi=150)
    print(out)


if __name__ == "__main__":
    main()
