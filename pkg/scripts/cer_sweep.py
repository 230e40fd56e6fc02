#!/usr/bin/env python3
"""Run a CER sweep for one or more codes and write a combined CSV.

Example:
    python scripts/cer_sweep.py --codes s4x2 perf4-punct --snr-db 6:2:16 \
        --trials 100000 --seed 1 --out cer.csv
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from midocodes.channel import CSV_HEADER, report_to_csv, simulate_cer
from midocodes.codes import build_code, make_constellation


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--codes", nargs="+", default=["s4x2", "perf4-punct"])
    ap.add_argument("--m", type=int, default=4, help="constellation size")
    ap.add_argument("--snr-db", default="6:2:16")
    ap.add_argument("--trials", type=int, default=10000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    start, step, stop = (float(v) for v in args.snr_db.split(":"))
    snrs = []
    v = start
    while v <= stop + 1e-9:
        snrs.append(round(v, 10))
        v += step

    lines = [CSV_HEADER]
    for cid in args.codes:
        desc = build_code(cid)
        const = make_constellation(desc.constellation_kind, args.m)
        rep = simulate_cer(desc, const, snrs, args.trials, args.seed,
                           threads=args.threads)
        lines.extend(report_to_csv(rep).strip().split("\n")[1:])
        for row in rep.rows:
            print(f"{cid:12s} {row.snr_db:5.1f} dB  cer={row.cer:.6f} "
                  f"({row.errors}/{row.trials})")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}")
    else:
        print(text)


if __name__ == "__main__":
    main()
