#!/usr/bin/env python3
"""Map the plateau-weight parameter region whose kernel has zeros.

Sweeps the two-parameter family (value A on [0, x], 1 outside) and writes a
CSV of certified zero counts inside |t| < rho.  The full-resolution map
(--full) matches the grid used in the larger experiments; the default is a
coarse version that runs in well under a minute.

    python scripts/zero_region_sweep.py --out zero_map.csv
    BERGKERN_THREADS=8 python scripts/zero_region_sweep.py --full --out zero_map.csv
"""

import argparse

import numpy as np

from bergkern.cli import emit_csv, TRUE_UNITS
from bergkern.zeros import sweep_step_weights


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rho", type=float, default=0.95)
    ap.add_argument("--full", action="store_true",
                    help="A in 1:40:0.5, x in 0.05:0.95:0.05 (slow)")
    ap.add_argument("--out", default="zero_map.csv")
    args = ap.parse_args()

    if args.full:
        a_values = np.arange(1.0, 40.01, 0.5)
        x_values = np.arange(0.05, 0.951, 0.05)
    else:
        a_values = np.arange(1.0, 40.01, 3.0)
        x_values = np.arange(0.05, 0.951, 0.15)

    cells = sweep_step_weights(a_values, x_values, rho=args.rho)
    rows = [[f"{c.plateau:.10g}", f"{c.split:.10g}", f"{c.rho:.10g}",
             "" if c.zero_count is None else c.zero_count, c.certified, c.note]
            for c in cells]
    emit_csv(f"plateau-weight zero counts; units {TRUE_UNITS}",
             ["A", "x", "rho", "zero_count", "certified", "note"], rows, args.out)
    with_zero = sum(1 for c in cells if c.zero_count)
    print(f"{len(cells)} cells -> {args.out}; {with_zero} with zeros, "
          f"{sum(1 for c in cells if not c.certified)} uncertified")


if __name__ == "__main__":
    main()
