"""Run the theorem sweep and write the report as JSON.

    python scripts/run_sweep.py --max-dim 4 --samples 1000 --seed 1 --out sweep.json
"""

import argparse
import json
import time

from rangedim.verification import sweep_theorem


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-dim", type=int, default=4)
    parser.add_argument("--samples", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--out", default=None)
    args = parser.parse_args()

    start = time.perf_counter()
    report = sweep_theorem(args.max_dim, args.samples, args.seed, workers=args.workers)
    elapsed = time.perf_counter() - start
    doc = report.to_dict() | {"seed": args.seed, "seconds": round(elapsed, 2)}
    print(f"{report.triples_checked} triples, {report.samples_checked} samples, "
          f"{len(report.failures)} failures in {elapsed:.1f}s")
    for f in report.failures[:20]:
        print("  ", f.triple, f.stage, f.detail)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
