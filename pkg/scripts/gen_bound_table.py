#!/usr/bin/env python3
"""Regenerate data/bound_table_c2.csv: the fixpoint length bound and its
log(result)/(n log n) ratio for n = 2..12 at C = 2."""

import csv
import math
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from apsum.bounds import BoundParams, solve_max_length

OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "bound_table_c2.csv"


def main() -> None:
    with open(OUT, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "C", "max_length", "log_ratio"])
        for n in range(2, 13):
            result = solve_max_length(BoundParams(n, 2))
            ratio = math.log2(result.max_length) / (n * math.log2(n))
            writer.writerow([n, 2, result.max_length, f"{ratio:.6f}"])
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
