"""Reproduce the postulate table for min, max and product.

    python3 scripts/table1.py --trials 500 --seed 7 --witness-dir out/witnesses
"""

import argparse
import json
import time

from possfusion.postulates import render_table, table1_report, table_matches, table_records
from possfusion.sampling import RandomBaseSpec


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=500)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--atoms", type=int, default=3)
    ap.add_argument("--witness-dir")
    ap.add_argument("--json", help="also write structured records here")
    args = ap.parse_args()

    t0 = time.perf_counter()
    table = table1_report(spec=RandomBaseSpec(atoms=args.atoms, trials=args.trials, seed=args.seed))
    print(render_table(table))
    print(f"\nmatches expected pattern: {table_matches(table)}  ({time.perf_counter() - t0:.1f}s)")
    for op, row in table.items():
        for post, cell in row.items():
            ce = cell.counterexample
            if ce is not None:
                print(f"  {op:4s} {post:4s} {ce.detail}")
    records = table_records(table, args.witness_dir)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(records, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
