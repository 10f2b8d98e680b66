"""Empirical average rank over d <= x, written as CSV and summarised on stdout.

    python scripts/average_rank_scan.py --q 3 --x 40 --out scan_q3.csv
"""

import argparse
import csv
from dataclasses import asdict

from kummer_lfun.lfun import CSV_FIELDS, average_rank_scan


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, default=3)
    ap.add_argument("--x", type=int, default=30)
    ap.add_argument("--jobs", type=int, default=None)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    res = average_rank_scan(args.q, args.x, jobs=args.jobs or 1)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(CSV_FIELDS), extrasaction="ignore")
            w.writeheader()
            w.writerows(asdict(r) for r in res.rows)
    for r, avg in zip(res.rows, res.running_averages):
        rank = "?" if r.rank is None else r.rank
        print(f"d={r.d:>3} rank={rank:>3} method={r.method:<10} running_avg={avg}")
    print(f"known average {res.average}, unknown {res.unknown_count}, "
          f"disagreements {res.disagreements}, discrepancies {len(res.discrepancies)}")


if __name__ == "__main__":
    main()
